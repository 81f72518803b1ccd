// SPDX-License-Identifier: Apache-2.0
#include "graph_checks.hpp"
#include "logigraph/graph.hpp"
#include "logigraph/synthgen.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <random>

using namespace logigraph;

namespace {

const DelimiterLibrary& lib() {
  static const DelimiterLibrary l = load_library();
  return l;
}

Sample dialogue(std::string context, std::string response) {
  Sample s;
  s.id = "d";
  s.mode = SampleMode::Dialogue;
  s.context = std::move(context);
  s.options = {std::move(response)};
  return s;
}

int node_containing(const LogicGraph& g, std::string_view needle) {
  int found = -1;
  for (int i = 0; i < g.num_nodes(); ++i)
    if (node_text(g, i).find(needle) != std::string::npos) {
      REQUIRE(found == -1);
      found = i;
    }
  REQUIRE(found >= 0);
  return found;
}

LogicGraph three_node_graph() {
  LogicGraph g;
  g.tokens = {"a", "b", "c"};
  g.boundary = 2;
  g.num_context = 2;
  for (int i = 0; i < 3; ++i) {
    Edu e;
    e.id = i;
    e.start = static_cast<std::size_t>(i);
    e.end = e.start + 1;
    e.origin = i < 2 ? Origin::Context : Origin::Candidate;
    g.nodes.push_back(e);
  }
  g.pos_map.node_of = {0, 1, 2};
  g.adj_explicit = Matrix::Zero(3, 3);
  g.adj_implicit = Matrix::Zero(3, 3);
  g.adj_variable = Matrix::Zero(3, 3);
  return g;
}

std::string random_text(std::mt19937_64& rng, int len) {
  static const std::vector<std::string> pool = {
      "river", "stone", "river", "stone", "bank", "money", "money", "tree", "grows", "falls",
      "the",   "a",     "of",    "and",   "but",  "because", "however", "as a result", "for example",
      ",",     ".",     ";",     "?",     "while", "since", "on the other hand", "rivers", "banks"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::string s = "word";
  for (int i = 0; i < len; ++i) s += " " + pool[pick(rng)];
  return s;
}

} // namespace

TEST_CASE("analog and digital passage") {
  const auto samples = read_samples(LOGIGRAPH_DATA_DIR "/analog_digital.jsonl");
  REQUIRE(samples.size() == 1);
  const auto g = build_graph(samples[0], samples[0].label, lib());
  CHECK(graph_checks::check_all(g, lib()).ok());

  const int u = node_containing(g, "digital systems cannot produce signals");
  const int v = node_containing(g, "digital systems are the best information systems");
  CHECK(g.is_context(u));
  CHECK_FALSE(g.is_context(v));
  CHECK(g.adj_variable(u, v) > 0.0);
  CHECK(g.adj_variable(v, u) > 0.0);

  // Last context unit and first candidate unit are adjacent in the sequence but never linked.
  const int last_ctx = g.num_context - 1;
  CHECK(g.adj_explicit(last_ctx, last_ctx + 1) == 0.0);
  CHECK(g.adj_implicit(last_ctx, last_ctx + 1) == 0.0);
  CHECK(g.adj_explicit.topRightCorner(g.num_context, g.num_nodes() - g.num_context).isZero());
  CHECK(g.adj_implicit.topRightCorner(g.num_context, g.num_nodes() - g.num_context).isZero());

  bool digital_system = false;
  for (const auto& t : g.terms)
    if (t.key() == "digit system") digital_system = t.nodes().contains(u) && t.nodes().contains(v);
  CHECK(digital_system);
}

TEST_CASE("single units with no shared term give empty matrices") {
  const auto g = build_graph(dialogue("hello world", "good night"), 0, lib());
  REQUIRE(g.num_nodes() == 2);
  CHECK(g.adj_explicit.isZero());
  CHECK(g.adj_implicit.isZero());
  CHECK(g.adj_variable.isZero());
}

TEST_CASE("candidate row splits evenly over two context units") {
  const auto g = build_graph(dialogue("apple pie . apple tart", "apple"), 0, lib());
  REQUIRE(g.num_nodes() == 3);
  REQUIRE(g.num_context == 2);
  CHECK(g.adj_variable.row(2).isApprox(RowVec<double>{{0.5, 0.5, 0.0}}));
  CHECK(g.adj_variable.row(0).isApprox(RowVec<double>{{0.0, 0.0, 1.0}}));
  CHECK(g.adj_variable.row(1).isApprox(RowVec<double>{{0.0, 0.0, 1.0}}));
  CHECK(g.adj_implicit(0, 1) == 1.0);
}

TEST_CASE("empty sides are rejected") {
  try {
    build_graph(dialogue(". ,", "fine"), 0, lib());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "graph");
  }
  CHECK_THROWS_AS(build_graph(dialogue("fine words", "?"), 0, lib()), Error);
}

TEST_CASE("row normalization") {
  Matrix b(1, 4);
  b << 1, 1, 0, 1;
  Matrix want(1, 4);
  want << 1.0 / 3, 1.0 / 3, 0, 1.0 / 3;
  CHECK(normalize_variable<double>(b).isApprox(want));

  Matrix single = Matrix::Zero(2, 2);
  single(0, 1) = 1;
  single(1, 0) = 1;
  CHECK(normalize_variable<double>(single) == single);

  Matrix c(2, 2);
  c << 1, 1, 1, 0;
  Matrix c_want(2, 2);
  c_want << 0.5, 0.5, 1, 0;
  CHECK(normalize_variable<double>(c) == c_want);

  Mat<float> f = Mat<float>::Zero(2, 3);
  f(0, 0) = 2;
  f(0, 2) = 2;
  CHECK(normalize_variable<float>(f)(0, 0) == 0.5f);
  CHECK(normalize_variable<float>(f).row(1).isZero());
}

TEST_CASE("ablations") {
  auto g = three_node_graph();
  g.adj_explicit(0, 1) = g.adj_explicit(1, 0) = 1;
  g.adj_implicit(1, 2) = g.adj_implicit(2, 1) = 1;
  g.adj_variable(0, 2) = 1;
  g.adj_variable(2, 0) = 1;

  SUBCASE("single type folds implicit into explicit") {
    const auto a = ablate(g, {EdgeMode::SingleEdgeType, {}, 0});
    Matrix want = Matrix::Zero(3, 3);
    want(0, 1) = want(1, 0) = want(1, 2) = want(2, 1) = 1;
    CHECK(a.adj_explicit == want);
    CHECK(a.adj_implicit.isZero());
    CHECK(a.adj_variable == g.adj_variable);
  }
  SUBCASE("random with p = 0 removes every connective edge") {
    const auto a = ablate(g, {EdgeMode::RandomEdges, 0.0, 42});
    CHECK(a.adj_explicit.isZero());
    CHECK(a.adj_implicit.isZero());
    CHECK(a.adj_variable == g.adj_variable);
  }
  SUBCASE("random with p = 1 is complete within each set") {
    auto one_set = g;
    one_set.num_context = 3;
    one_set.boundary = 3;
    const auto a = ablate(one_set, {EdgeMode::RandomEdges, 1.0, 42});
    Matrix want = Matrix::Ones(3, 3);
    want.diagonal().setZero();
    CHECK(a.adj_explicit == want);
    CHECK(a.adj_implicit.isZero());
    const auto split = ablate(g, {EdgeMode::RandomEdges, 1.0, 42});
    CHECK(split.adj_explicit(0, 1) == 1.0);
    CHECK(split.adj_explicit(0, 2) == 0.0);
    CHECK(split.adj_explicit(1, 2) == 0.0);
  }
  SUBCASE("fully connected") {
    const auto a = ablate(g, {EdgeMode::FullyConnected, {}, 0});
    Matrix want = Matrix::Ones(3, 3);
    want.diagonal().setZero();
    CHECK(a.adj_explicit == want);
    CHECK(a.adj_implicit.isZero());
    graph_checks::Report r;
    graph_checks::check_matrices(a, r, /*cross_connective_allowed=*/true);
    CHECK(r.ok());
  }
  SUBCASE("paper leaves the graph alone") {
    const auto a = ablate(g, {});
    CHECK(a.adj_explicit == g.adj_explicit);
    CHECK(a.adj_implicit == g.adj_implicit);
  }
  SUBCASE("bad rate") {
    CHECK_THROWS_AS(ablate(g, {EdgeMode::RandomEdges, 1.5, 0}), Error);
    CHECK_THROWS_AS(parse_edge_mode("random:x"), Error);
    CHECK_THROWS_AS(parse_edge_mode("bogus"), Error);
    CHECK(parse_edge_mode("random:0.25").p == 0.25);
    CHECK_FALSE(parse_edge_mode("random").p.has_value());
  }
}

TEST_CASE("random edges are seeded and density matched") {
  const auto samples = read_samples(LOGIGRAPH_DATA_DIR "/analog_digital.jsonl");
  const auto g = build_graph(samples[0], 0, lib());
  const double d = connective_density(g);
  const int n = g.num_nodes();
  const int nc = g.num_context, nv = n - nc;
  int edges = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges += (g.adj_explicit(i, j) != 0.0 || g.adj_implicit(i, j) != 0.0);
  CHECK(d == doctest::Approx(edges / ((nc * (nc - 1) + nv * (nv - 1)) / 2.0)));

  const auto a = ablate(g, {EdgeMode::RandomEdges, {}, 9});
  const auto b = ablate(g, {EdgeMode::RandomEdges, {}, 9});
  CHECK(a.adj_explicit == b.adj_explicit);
  CHECK(a.adj_explicit.transpose() == a.adj_explicit);
  CHECK(a.adj_explicit.diagonal().isZero());
}

TEST_CASE("invariants on generated and random samples") {
  SynthSpec spec;
  spec.mode = SynthMode::Mixed;
  spec.n_samples = 120;
  spec.seed = 3;
  for (const auto& s : generate(spec))
    for (int c = 0; c < s.num_candidates(); ++c) {
      const auto r = graph_checks::check_all(build_graph(s, c, lib()), lib());
      INFO(s.id, " candidate ", c, " ", r.failures.empty() ? "" : r.failures.front());
      CHECK(r.ok());
    }

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    Sample s;
    s.id = "r" + std::to_string(trial);
    s.mode = trial % 3 == 0 ? SampleMode::Dialogue : SampleMode::Qa;
    s.context = random_text(rng, 5 + trial % 30);
    if (s.mode == SampleMode::Qa) s.question = random_text(rng, 1 + trial % 4);
    s.options = {random_text(rng, 1 + trial % 9)};
    for (const auto g_cfg : {Granularity::Edu, Granularity::Clause, Granularity::Sentence}) {
      GraphConfig cfg;
      cfg.granularity = g_cfg;
      cfg.max_len = trial % 5 == 0 ? 16 : 256;
      const auto g = build_graph(s, 0, lib(), cfg);
      graph_checks::Report r;
      graph_checks::check_partition(g, r);
      graph_checks::check_matrices(g, r);
      graph_checks::check_variable_soundness(g, r);
      if (g_cfg == Granularity::Edu) graph_checks::check_connectives(g, lib(), r);
      for (const auto mode : {EdgeMode::SingleEdgeType, EdgeMode::RandomEdges})
        graph_checks::check_matrices(ablate(g, {mode, {}, 5}), r);
      INFO(s.context, " | ", r.failures.empty() ? "" : r.failures.front());
      CHECK(r.ok());
    }
  }
}

TEST_CASE("construction is deterministic") {
  const auto samples = read_samples(LOGIGRAPH_DATA_DIR "/analog_digital.jsonl");
  CHECK(graph_to_json(build_graph(samples[0], 1, lib())) ==
        graph_to_json(build_graph(samples[0], 1, lib())));
}

TEST_CASE("json and dot export") {
  const auto samples = read_samples(LOGIGRAPH_DATA_DIR "/analog_digital.jsonl");
  const auto g = build_graph(samples[0], 0, lib());
  const auto j = nlohmann::json::parse(graph_to_json(g));
  CHECK(j["format"] == "logigraph.graph");
  CHECK(j["nodes"].size() == static_cast<std::size_t>(g.num_nodes()));
  CHECK(j["num_context"] == g.num_context);
  CHECK(j["boundary"] == g.boundary);
  CHECK(j["pos_map"].get<std::vector<int>>() == g.pos_map.node_of);

  Matrix exp = Matrix::Zero(g.num_nodes(), g.num_nodes());
  for (const auto& e : j["edges"]["explicit"]) exp(e[0].get<int>(), e[1].get<int>()) = 1;
  CHECK(exp + exp.transpose() == g.adj_explicit);
  for (const auto& e : j["edges"]["variable"]) {
    const int a = e[0], b = e[1];
    CHECK(e[2].get<double>() == g.adj_variable(a, b));
    CHECK(e[3].get<double>() == g.adj_variable(b, a));
  }

  const auto dot = graph_to_dot(g);
  CHECK(dot.starts_with("graph logic {"));
  const int u = node_containing(g, "digital systems cannot produce signals");
  const int v = node_containing(g, "digital systems are the best information systems");
  CHECK(dot.find("n" + std::to_string(u) + " -- n" + std::to_string(v) + " [type=variable") !=
        std::string::npos);
}
