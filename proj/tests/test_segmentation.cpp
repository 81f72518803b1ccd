// SPDX-License-Identifier: Apache-2.0
#include "logigraph/segmentation.hpp"

#include <doctest.h>

#include <random>

using namespace logigraph;

namespace {

TokenizedText text(std::string_view s, Origin o = Origin::Context) { return {tokenize(s), o}; }

void check_partition(const Segmentation& seg, std::size_t n_tokens) {
  REQUIRE(seg.pos_map.size() == n_tokens);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < seg.edus.size(); ++i) {
    const auto& e = seg.edus[i];
    CHECK(e.id == static_cast<int>(i));
    CHECK(e.start == pos);
    CHECK(e.end > e.start);
    for (std::size_t l = e.start; l < e.end; ++l) CHECK(seg.pos_map(l) == e.id);
    pos = e.end;
  }
  CHECK(pos == n_tokens);
  CHECK(seg.pos_map.node_count() == static_cast<int>(seg.edus.size()));
}

} // namespace

TEST_CASE("connective leads the following unit") {
  const auto lib = load_library();
  const auto t = text("A , while B .");
  const auto seg = segment(t, lib, Granularity::Edu);
  REQUIRE(seg.edus.size() == 2);
  CHECK(seg.edus[0].start == 0);
  CHECK(seg.edus[0].end == 1);
  REQUIRE(seg.edus[1].leading_connective.has_value());
  CHECK(seg.edus[1].leading_connective->surface == "while");
  CHECK(seg.edus[1].leading_connective->kind == DelimiterKind::Explicit);
  check_partition(seg, t.tokens.size());
}

TEST_CASE("no delimiters gives one unit") {
  const auto lib = load_library();
  const auto t = text("hello world");
  const auto seg = segment(t, lib);
  REQUIRE(seg.edus.size() == 1);
  CHECK(seg.pos_map.node_of == std::vector<int>{0, 0});
}

TEST_CASE("sentence granularity splits on periods only") {
  const auto lib = load_library();
  const auto t = text("p . q . r");
  CHECK(segment(t, lib, Granularity::Sentence).edus.size() == 3);
  const auto t2 = text("p , q because r . s");
  CHECK(segment(t2, lib, Granularity::Sentence).edus.size() == 2);
  CHECK(segment(t2, lib, Granularity::Clause).edus.size() == 3);
  CHECK(segment(t2, lib, Granularity::Edu).edus.size() == 4);
}

TEST_CASE("trailing delimiter stays with the last unit") {
  const auto lib = load_library();
  const auto seg = segment(text("a because b ."), lib);
  REQUIRE(seg.edus.size() == 2);
  CHECK(seg.edus[1].end == 4);
}

TEST_CASE("granularity parse") {
  CHECK(parse_granularity("edu") == Granularity::Edu);
  CHECK(parse_granularity("clause") == Granularity::Clause);
  CHECK(parse_granularity("sentence") == Granularity::Sentence);
  CHECK_THROWS_AS(parse_granularity("word"), Error);
}

TEST_CASE("property: partition, reconstruction and monotonicity") {
  const auto lib = load_library();
  const std::vector<std::string> pool = {"a", "b", "c", "dog", "runs", ",", ".", ";", "because", "so",
                                         "however", "on", "the", "other", "hand", "?", "if", "and"};
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    TokenizedText t;
    t.tokens.resize(1 + rng() % 25);
    for (auto& w : t.tokens) w = pool[rng() % pool.size()];
    const auto edu = segment(t, lib, Granularity::Edu);
    const auto clause = segment(t, lib, Granularity::Clause);
    const auto sent = segment(t, lib, Granularity::Sentence);
    for (const auto* s : {&edu, &clause, &sent}) {
      check_partition(*s, t.tokens.size());
      std::vector<std::string> rebuilt;
      for (const auto& e : s->edus)
        rebuilt.insert(rebuilt.end(), t.tokens.begin() + static_cast<long>(e.start),
                       t.tokens.begin() + static_cast<long>(e.end));
      CHECK(rebuilt == t.tokens);
    }
    CHECK(sent.edus.size() <= clause.edus.size());
    CHECK(clause.edus.size() <= edu.edus.size());
  }
}
