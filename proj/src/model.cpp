// SPDX-License-Identifier: Apache-2.0
#include "logigraph/model.hpp"

namespace logigraph {

NodeInit parse_node_init(std::string_view s) {
  if (s == "pooled") return NodeInit::Pooled;
  if (s == "random") return NodeInit::Random;
  throw Error("usage", "unknown node init '" + std::string(s) + "' (expected pooled or random)");
}

const char* to_string(NodeInit n) { return n == NodeInit::Pooled ? "pooled" : "random"; }

std::uint64_t stable_hash(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Model::Model(ModelConfig cfg, Vocab vocab, std::uint64_t seed) : cfg_(std::move(cfg)), vocab_(std::move(vocab)) {
  Rng rng(seed);
  if (!cfg_.embeddings.empty()) {
    store_ = EmbeddingStore::open(cfg_.embeddings);
    if (store_->dim() != cfg_.hidden)
      throw Error("config", "embedding file width " + std::to_string(store_->dim()) + " differs from hidden size " +
                                std::to_string(cfg_.hidden));
  }
  encoder_ = ToyEncoder(vocab_.size(), cfg_.hidden, rng);
  reasoner_ = ReasonerParams(cfg_.hidden, cfg_.layers, cfg_.per_type, rng);
  fusion_ = FusionParams(cfg_.hidden, cfg_.pooling, rng);
}

PreparedSample Model::prepare(const Sample& s, const DelimiterLibrary& lib, const StopwordSet* stopwords) const {
  PreparedSample out;
  out.id = s.id;
  out.label = s.label;
  GraphConfig gc;
  gc.granularity = cfg_.granularity;
  gc.max_len = cfg_.max_len;
  gc.stopwords = stopwords;
  for (int c = 0; c < s.num_candidates(); ++c) {
    PreparedCandidate pc;
    pc.input = build_input(s, c, vocab_, cfg_.max_len);
    pc.graph = build_graph(s, c, lib, gc);
    const std::uint64_t key = stable_hash(s.id, static_cast<std::uint64_t>(c));
    if (cfg_.edges.mode != EdgeMode::Paper) {
      Ablation a = cfg_.edges;
      a.seed ^= key;
      pc.graph = ablate(std::move(pc.graph), a);
    }
    if (cfg_.node_init == NodeInit::Random) {
      Rng rng(key);
      pc.random_nodes = normal_init(pc.graph.num_nodes(), cfg_.hidden, 1.0, rng);
    }
    if (pc.graph.pos_map.size() != pc.input.ids.size())
      throw Error("internal", "graph and encoder disagree on the token sequence of '" + s.id + "'");
    out.candidates.push_back(std::move(pc));
  }
  return out;
}

Model::Output Model::forward(ad::Tape& tape, const PreparedSample& s, Rng* dropout_rng) const {
  Output out;
  const int C = static_cast<int>(s.candidates.size());
  for (int c = 0; c < C; ++c) {
    const auto& pc = s.candidates[static_cast<std::size_t>(c)];
    const EncoderOutput enc = store_ ? encode_external(tape, *store_, s.id, c, pc.input)
                                     : encode_toy(tape, encoder_, pc.input);
    const ad::Var t = enc.embeddings;
    ad::Var logic;
    if (cfg_.use_graph) {
      const int n = pc.graph.num_nodes();
      ad::Var v0 = cfg_.node_init == NodeInit::Pooled ? init_nodes(t, pc.graph.pos_map, n)
                                                      : tape.constant(pc.random_nodes);
      logic = assign_tokens(reason(tape, pc.graph, v0, reasoner_), pc.graph.pos_map);
    } else {
      logic = tape.constant(Matrix::Zero(t.rows(), t.cols()));
    }
    ad::Var e = fuse(tape, t, logic, fusion_, cfg_.dropout, dropout_rng);
    out.scores.push_back(score(tape, pool(tape, e, enc.boundary, fusion_), fusion_));
  }
  std::optional<int> label;
  if (s.label >= 0 && s.label < C) label = s.label;
  out.ranking = rank(out.scores, label);
  return out;
}

std::vector<Parameter*> Model::parameters() {
  std::vector<Parameter*> out;
  if (!store_) encoder_.collect(out);
  reasoner_.collect(out);
  fusion_.collect(out);
  return out;
}

std::vector<const Parameter*> Model::parameters() const {
  auto ps = const_cast<Model*>(this)->parameters();
  return {ps.begin(), ps.end()};
}

} // namespace logigraph
