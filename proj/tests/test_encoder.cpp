// SPDX-License-Identifier: Apache-2.0
#include "gradcheck.hpp"
#include "logigraph/encoder.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace logigraph;

namespace {

Sample qa(std::string passage, std::string question, std::vector<std::string> options) {
  Sample s;
  s.id = "s1";
  s.context = std::move(passage);
  s.question = std::move(question);
  s.options = std::move(options);
  return s;
}

std::vector<std::string> tokens_of(const EncoderInput& in, const Vocab& v) {
  std::vector<std::string> out;
  for (int id : in.ids) out.push_back(v.token(id));
  return out;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

template <typename F>
std::string error_code(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

} // namespace

TEST_CASE("qa input layout") {
  const auto s = qa("a b", "q", {"o", "p"});
  const auto v = Vocab::build({s});
  const auto in = build_input(s, 0, v, 256);
  CHECK(tokens_of(in, v) ==
        std::vector<std::string>{"<s>", "a", "b", "</s>", "q", "\xE2\x80\x96", "o", "</s>"});
  CHECK(in.boundary == 4);
  CHECK(in.ids.front() == Vocab::kBos);
  CHECK(in.ids[3] == Vocab::kEos);
  CHECK(in.ids[5] == Vocab::kConcat);
  CHECK(build_input(s, 0, v, 256).ids == in.ids);
  CHECK(error_code([&] { build_input(s, 2, v, 256); }) == "range");
}

TEST_CASE("dialogue input layout") {
  Sample s;
  s.id = "d";
  s.mode = SampleMode::Dialogue;
  s.context = "hi";
  s.options = {"yo", "no"};
  const auto v = Vocab::build({s});
  const auto in = build_input(s, 0, v, 256);
  CHECK(tokens_of(in, v) == std::vector<std::string>{"<s>", "hi", "</s>", "yo"});
  CHECK(in.boundary == 3);
}

TEST_CASE("truncation keeps the closing marker") {
  const auto s = qa("one two three four five", "why", {"because of that"});
  const auto v = Vocab::build({s});
  const auto in = build_input(s, 0, v, 4);
  CHECK(in.ids.size() == 4);
  CHECK(in.ids.back() == Vocab::kEos);
  CHECK(in.boundary > 1);
  CHECK(in.boundary < 4);
  for (int len = 4; len < 14; ++len) {
    const auto t = build_input(s, 0, v, len);
    CHECK(static_cast<int>(t.ids.size()) <= len);
    CHECK(t.ids.back() == Vocab::kEos);
    CHECK(t.boundary > 1);
    CHECK(t.boundary < static_cast<int>(t.ids.size()));
  }
}

TEST_CASE("vocab") {
  Vocab v;
  CHECK(v.size() == Vocab::kNumSpecial);
  CHECK(v.id("<s>") == Vocab::kBos);
  CHECK(v.id("</s>") == Vocab::kEos);
  CHECK(v.id("\xE2\x80\x96") == Vocab::kConcat);
  CHECK(v.id("never seen") == Vocab::kUnk);
  const int a = v.add("apple");
  CHECK(v.add("apple") == a);
  CHECK(v.token(a) == "apple");

  const auto back = Vocab::from_json(v.to_json());
  CHECK(back.size() == v.size());
  for (int i = 0; i < v.size(); ++i) CHECK(back.token(i) == v.token(i));
  CHECK(error_code([] { Vocab::from_json("{\"format\":\"other\"}"); }) == "vocab");
  CHECK(error_code([] { Vocab::from_json("not json"); }) == "vocab");

  Sample s = qa("x x y", "q", {"y z", "w"});
  const auto built = Vocab::build({s}, 2);
  CHECK(built.contains("x"));
  CHECK_FALSE(built.contains("z"));
}

TEST_CASE("toy encoder shape, context sensitivity and finiteness") {
  const auto s = qa("red fox jumps over the lazy dog", "what", {"nothing happens", "x"});
  const auto v = Vocab::build({s});
  Rng rng(3);
  ToyEncoder enc(v.size(), 8, rng);
  const auto in = build_input(s, 0, v, 256);
  ad::Tape t;
  const auto out = encode_toy(t, enc, in);
  CHECK(out.embeddings.rows() == static_cast<Eigen::Index>(in.ids.size()));
  CHECK(out.embeddings.cols() == 8);
  CHECK(out.boundary == in.boundary);

  // Swap two distant tokens: their own rows change, and so do rows in between.
  auto swapped = in;
  std::swap(swapped.ids[1], swapped.ids[7]);
  const auto out2 = encode_toy(t, enc, swapped);
  for (int r : {1, 4, 7}) CHECK((out.embeddings.value().row(r) - out2.embeddings.value().row(r)).norm() > 1e-6);

  EncoderInput pads{IndexVec(6, Vocab::kPad), std::vector<std::string>(6, "<pad>"), 2};
  CHECK(encode_toy(t, enc, pads).embeddings.value().allFinite());
  CHECK(error_code([&] { ToyEncoder(10, 5, rng); }) == "config");
}

TEST_CASE("toy encoder passes finite differences") {
  const auto s = qa("a b c", "q", {"d a"});
  const auto v = Vocab::build({s});
  const auto in = build_input(s, 0, v, 256);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    ToyEncoder enc(v.size(), 4, rng);
    std::vector<Parameter*> ps;
    enc.collect(ps);
    for (auto* p : ps) p->value *= 0.1; // small-input regime
    const auto r = gradcheck::check(
        [&](ad::Tape& t) { return gradcheck::project(encode_toy(t, enc, in).embeddings, seed); }, ps);
    INFO("seed ", seed, " rel ", r.max_rel_error, " a ", r.worst_analytic, " n ", r.worst_numeric);
    CHECK(r.max_rel_error < 1e-4);
  }
}

TEST_CASE("embedding store") {
  const auto path = temp_path("logigraph_test.lgem");
  Matrix m(8, 64);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<float>(0.01 * i - 1.0);
  Matrix small = Matrix::Constant(7, 64, 0.5);
  EmbeddingStore::write(path, {{{"s1", 0}, m}, {{"s1", 1}, small}});

  const auto store = EmbeddingStore::open(path);
  CHECK(store.dim() == 64);
  CHECK(store.contains("s1", 0));
  CHECK_FALSE(store.contains("s2", 0));
  CHECK(store.get("s1", 0, 8) == m);
  CHECK(error_code([&] { store.get("s2", 0, 8); }) == "missing-embedding");
  CHECK(error_code([&] { store.get("s1", 1, 8); }) == "shape-mismatch");

  const auto s = qa("a b", "q", {"o", "p"});
  const auto v = Vocab::build({s});
  ad::Tape t;
  const auto out = encode_external(t, store, "s1", 0, build_input(s, 0, v, 256));
  CHECK(out.embeddings.value() == m);
  CHECK(out.boundary == 4);

  // Header bytes: magic, version 1, then a JSON header of the stated length.
  std::ifstream in(path, std::ios::binary);
  char magic[4];
  std::uint32_t version = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  CHECK(std::string(magic, 4) == "LGEM");
  CHECK(version == 1);
  in.close();

  const auto bad = temp_path("logigraph_bad.lgem");
  std::ofstream(bad) << "nope";
  CHECK(error_code([&] { EmbeddingStore::open(bad); }) == "format");
  std::remove(path.c_str());
  std::remove(bad.c_str());
}
