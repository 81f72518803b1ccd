// SPDX-License-Identifier: Apache-2.0
#include "logigraph/encoder.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>

namespace logigraph {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'L', 'G', 'E', 'M'};
constexpr std::uint32_t kVersion = 1;

} // namespace

EncoderInput build_input(const Sample& sample, int c, const Vocab& vocab, int max_len) {
  auto layout = assemble_sequence(sample, c, max_len);
  EncoderInput in;
  in.ids.reserve(layout.tokens.size());
  for (const auto& t : layout.tokens) in.ids.push_back(vocab.id(t));
  in.tokens = std::move(layout.tokens);
  in.boundary = static_cast<int>(layout.boundary);
  return in;
}

ToyEncoder::ToyEncoder(int vocab_size, int d, Rng& rng)
    : embed{"encoder.embed", ParamGroup::Encoder, normal_init(vocab_size, d, 1.0, rng)},
      gru("encoder.gru", ParamGroup::Encoder, d, d / 2, rng), dim(d) {
  if (d < 2 || d % 2 != 0) throw Error("config", "hidden size must be even and >= 2");
}

void ToyEncoder::collect(std::vector<Parameter*>& out) {
  out.push_back(&embed);
  gru.collect(out);
}

EncoderOutput encode_toy(ad::Tape& tape, const ToyEncoder& enc, const EncoderInput& input) {
  if (input.ids.empty()) throw Error("shape", "encode_toy: empty input");
  ad::Var x = ad::embedding(tape, enc.embed, input.ids);
  return {enc.gru(tape, x), input.boundary};
}

EmbeddingStore EmbeddingStore::open(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot read " + path);
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t header_len = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&header_len), sizeof header_len);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error("format", path + ": not an embedding file");
  if (version != kVersion) throw Error("format", path + ": unsupported version " + std::to_string(version));
  std::string header(header_len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw Error("format", path + ": truncated header");

  EmbeddingStore s;
  s.path_ = path;
  s.data_start_ = 16 + header_len;
  try {
    const auto j = json::parse(header);
    s.dim_ = j.at("dim").get<int>();
    for (const auto& r : j.at("records"))
      s.index_[{r.at("sample").get<std::string>(), r.at("candidate").get<int>()}] = {
          r.at("offset").get<std::uint64_t>(), r.at("rows").get<Eigen::Index>()};
  } catch (const json::exception& e) {
    throw Error("format", path + ": bad header: " + e.what());
  }
  return s;
}

void EmbeddingStore::write(const std::string& path, const std::map<Key, Matrix>& records) {
  json header;
  header["dim"] = records.empty() ? 0 : records.begin()->second.cols();
  header["records"] = json::array();
  std::uint64_t offset = 0;
  for (const auto& [key, m] : records) {
    if (m.cols() != header["dim"].get<Eigen::Index>())
      throw Error("shape-mismatch", "all records must share one width");
    header["records"].push_back(
        {{"sample", key.sample}, {"candidate", key.candidate}, {"rows", m.rows()}, {"offset", offset}});
    offset += static_cast<std::uint64_t>(m.size()) * sizeof(float);
  }
  const std::string h = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path);
  const std::uint64_t len = h.size();
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  for (const auto& [key, m] : records) {
    const Eigen::Matrix<float, DYN, DYN, Eigen::RowMajor> f = m.cast<float>();
    out.write(reinterpret_cast<const char*>(f.data()), static_cast<std::streamsize>(f.size() * sizeof(float)));
  }
}

bool EmbeddingStore::contains(const std::string& sample_id, int candidate) const {
  return index_.count({sample_id, candidate}) != 0;
}

Matrix EmbeddingStore::get(const std::string& sample_id, int candidate, Eigen::Index length) const {
  auto it = index_.find({sample_id, candidate});
  if (it == index_.end())
    throw Error("missing-embedding",
                "no embedding for sample '" + sample_id + "' candidate " + std::to_string(candidate));
  if (it->second.rows != length)
    throw Error("shape-mismatch", "embedding for sample '" + sample_id + "' candidate " +
                                      std::to_string(candidate) + " has " + std::to_string(it->second.rows) +
                                      " rows but the input has " + std::to_string(length) + " tokens");
  std::ifstream in(path_, std::ios::binary);
  in.seekg(static_cast<std::streamoff>(data_start_ + it->second.offset));
  Eigen::Matrix<float, DYN, DYN, Eigen::RowMajor> f(length, dim_);
  in.read(reinterpret_cast<char*>(f.data()), static_cast<std::streamsize>(f.size() * sizeof(float)));
  if (!in) throw Error("format", path_ + ": truncated record");
  return f.cast<double>();
}

EncoderOutput encode_external(ad::Tape& tape, const EmbeddingStore& store, const std::string& sample_id,
                              int candidate, const EncoderInput& input) {
  return {tape.constant(store.get(sample_id, candidate, static_cast<Eigen::Index>(input.ids.size()))),
          input.boundary};
}

} // namespace logigraph
