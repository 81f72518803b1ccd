// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_MODEL_HPP
#define LOGIGRAPH_MODEL_HPP

#include "logigraph/encoder.hpp"
#include "logigraph/fusion.hpp"
#include "logigraph/graph.hpp"
#include "logigraph/reasoner.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace logigraph {

enum class NodeInit { Pooled, Random };
NodeInit parse_node_init(std::string_view s);
const char* to_string(NodeInit n);

struct ModelConfig {
  int hidden = 64;
  int layers = 2;
  int max_len = 256;
  Granularity granularity = Granularity::Edu;
  Ablation edges;
  bool use_graph = true;
  NodeInit node_init = NodeInit::Pooled;
  bool per_type = false;
  Pooling pooling = Pooling::Elementwise;
  double dropout = 0.1;
  /// External embedding file; empty selects the built-in encoder.
  std::string embeddings;
};

/// Everything about one candidate that does not depend on parameters.
struct PreparedCandidate {
  EncoderInput input;
  LogicGraph graph;
  Matrix random_nodes; // filled for NodeInit::Random
};

struct PreparedSample {
  std::string id;
  int label = 0;
  std::vector<PreparedCandidate> candidates;
};

/// Stable 64-bit hash (FNV-1a) used to derive per-sample seeds.
std::uint64_t stable_hash(std::string_view s, std::uint64_t seed = 0);

class Model {
public:
  Model(ModelConfig cfg, Vocab vocab, std::uint64_t seed);

  PreparedSample prepare(const Sample& s, const DelimiterLibrary& lib, const StopwordSet* stopwords = nullptr) const;

  struct Output {
    std::vector<ad::Var> scores;
    Ranking ranking;
  };
  /// `dropout_rng` switches on training-time dropout.
  Output forward(ad::Tape& tape, const PreparedSample& s, Rng* dropout_rng = nullptr) const;

  /// Fixed order; names are unique.
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  const ModelConfig& config() const { return cfg_; }
  const Vocab& vocab() const { return vocab_; }

private:
  ModelConfig cfg_;
  Vocab vocab_;
  ToyEncoder encoder_;
  ReasonerParams reasoner_;
  FusionParams fusion_;
  std::optional<EmbeddingStore> store_;
};

} // namespace logigraph

#endif // LOGIGRAPH_MODEL_HPP
