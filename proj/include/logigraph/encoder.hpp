// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_ENCODER_HPP
#define LOGIGRAPH_ENCODER_HPP

#include "logigraph/layers.hpp"
#include "logigraph/sample.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace logigraph {

class Vocab {
public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;
  static constexpr int kConcat = 4;
  static constexpr int kNumSpecial = 5;

  Vocab();

  /// Collects every token of every sample (context, question, options).
  static Vocab build(const std::vector<Sample>& samples, int min_freq = 1);

  int add(const std::string& token);
  int id(const std::string& token) const;
  const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(tokens_.size()); }
  bool contains(const std::string& token) const { return ids_.count(token) != 0; }

  std::string to_json() const;
  static Vocab from_json(const std::string& text);
  void save(const std::string& path) const;
  static Vocab load(const std::string& path);

private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> tokens_;
};

struct EncoderInput {
  IndexVec ids;
  std::vector<std::string> tokens;
  int boundary = 0; // M
};

EncoderInput build_input(const Sample& sample, int c, const Vocab& vocab, int max_len);

struct EncoderOutput {
  ad::Var embeddings; // L x b
  int boundary = 0;
};

/// Trainable stand-in for a pretrained encoder: an embedding table followed by
/// one bidirectional GRU with b/2 units per direction.
struct ToyEncoder {
  Parameter embed;
  BiGru gru;
  int dim = 0;

  ToyEncoder() = default;
  ToyEncoder(int vocab_size, int dim, Rng& rng);
  void collect(std::vector<Parameter*>& out);
};

EncoderOutput encode_toy(ad::Tape& tape, const ToyEncoder& enc, const EncoderInput& input);

/// Precomputed embeddings, one L x b float32 matrix per (sample id, candidate).
/// Layout: "LGEM", u32 version, u64 header length, JSON header, then records.
class EmbeddingStore {
public:
  struct Key {
    std::string sample;
    int candidate = 0;
    auto operator<=>(const Key&) const = default;
  };

  static EmbeddingStore open(const std::string& path);
  static void write(const std::string& path, const std::map<Key, Matrix>& records);

  Matrix get(const std::string& sample_id, int candidate, Eigen::Index length) const;
  int dim() const { return dim_; }
  bool contains(const std::string& sample_id, int candidate) const;

private:
  struct Entry {
    std::uint64_t offset = 0;
    Eigen::Index rows = 0;
  };
  std::string path_;
  int dim_ = 0;
  std::uint64_t data_start_ = 0;
  std::map<Key, Entry> index_;
};

EncoderOutput encode_external(ad::Tape& tape, const EmbeddingStore& store, const std::string& sample_id,
                              int candidate, const EncoderInput& input);

} // namespace logigraph

#endif // LOGIGRAPH_ENCODER_HPP
