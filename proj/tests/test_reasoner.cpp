// SPDX-License-Identifier: Apache-2.0
#include "gradcheck.hpp"
#include "logigraph/reasoner.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace logigraph;

namespace {

Matrix mat(Eigen::Index r, Eigen::Index c, std::initializer_list<double> xs) {
  Matrix m(r, c);
  Eigen::Index i = 0;
  for (double x : xs) m.data()[i++] = x;
  return m;
}

/// Bare graph with `n` one-token nodes; the first `nc` are context.
LogicGraph bare_graph(int n, int nc) {
  LogicGraph g;
  g.num_context = nc;
  g.boundary = static_cast<std::size_t>(nc);
  for (int i = 0; i < n; ++i) {
    Edu e;
    e.id = i;
    e.start = static_cast<std::size_t>(i);
    e.end = e.start + 1;
    e.origin = i < nc ? Origin::Context : Origin::Candidate;
    g.nodes.push_back(e);
    g.tokens.push_back("t" + std::to_string(i));
    g.pos_map.node_of.push_back(i);
  }
  g.adj_explicit = g.adj_implicit = g.adj_variable = Matrix::Zero(n, n);
  return g;
}

void link(Matrix& m, int i, int j, double v = 1.0) {
  m(i, j) = v;
  m(j, i) = v;
}

ReasonerLayer hand_layer() {
  ReasonerLayer l;
  l.alpha.w = {"a.w", ParamGroup::Reasoner, mat(2, 1, {0.3, -0.2})};
  l.alpha.b = {"a.b", ParamGroup::Reasoner, mat(1, 1, {0.1})};
  l.gamma[0].w = {"g.w", ParamGroup::Reasoner, mat(2, 2, {1, 0.5, -0.5, 1})};
  l.gamma[0].b = {"g.b", ParamGroup::Reasoner, mat(1, 2, {0, 0.1})};
  l.eta.w = {"e.w", ParamGroup::Reasoner, mat(2, 2, {0.2, 0, 0, 0.3})};
  l.eta.b = {"e.b", ParamGroup::Reasoner, mat(1, 2, {0.05, -0.05})};
  return l;
}

Matrix random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  return normal_init(r, c, 1.0, rng);
}

/// Union-graph hop distances by BFS.
std::vector<std::vector<int>> distances(const LogicGraph& g) {
  const int n = g.num_nodes();
  const auto support = edge_support(g);
  std::vector<std::vector<int>> d(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int s = 0; s < n; ++s) {
    auto& ds = d[static_cast<std::size_t>(s)];
    ds[static_cast<std::size_t>(s)] = 0;
    std::vector<int> frontier{s};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int u : frontier)
        for (int v = 0; v < n; ++v)
          if ((support(u, v) || support(v, u)) && ds[static_cast<std::size_t>(v)] < 0) {
            ds[static_cast<std::size_t>(v)] = ds[static_cast<std::size_t>(u)] + 1;
            next.push_back(v);
          }
      frontier = std::move(next);
    }
  }
  return d;
}

LogicGraph random_graph(Rng& rng, int n) {
  std::uniform_int_distribution<int> split(1, n - 1);
  auto g = bare_graph(n, split(rng));
  std::bernoulli_distribution p(0.3);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (g.same_set(i, j)) {
        if (j == i + 1 && p(rng)) link(p(rng) ? g.adj_explicit : g.adj_implicit, i, j);
      } else if (p(rng)) {
        link(g.adj_variable, i, j);
      }
    }
  g.adj_variable = normalize_variable<double>(g.adj_variable);
  return g;
}

} // namespace

TEST_CASE("node initialization sums token rows") {
  ad::Tape t;
  PositionMap pm{{0, 0}};
  const Matrix e = mat(2, 3, {1, 2, 3, -1, -2, -3});
  CHECK(init_nodes(t.constant(e), pm, 1).value().isZero());

  PositionMap single{{0, 1, 1}};
  const Matrix x = mat(3, 2, {4, 5, 1, 1, 2, 2});
  CHECK(init_nodes(t.constant(x), single, 2).value().row(0) == x.row(0));

  Rng rng(4);
  const Matrix y = random_matrix(rng, 5, 3);
  PositionMap two{{0, 1, 1, 0, 1}};
  const auto v = init_nodes(t.constant(y), two, 2).value();
  CHECK(v.row(0).isApprox(y.row(0) + y.row(3)));
  CHECK(v.row(1).isApprox(y.row(1) + y.row(2) + y.row(4)));
  CHECK_THROWS_AS(init_nodes(t.constant(y), single, 2), Error);
}

TEST_CASE("hand traced two-node implicit edge") {
  auto g = bare_graph(2, 2);
  link(g.adj_implicit, 0, 1);
  const auto layer = hand_layer();
  ad::Tape t;
  const auto r = propagate(t, g, t.constant(mat(2, 2, {1, -1, 0.5, 2})), layer, false);
  // alpha = sigmoid(v W_alpha + b_alpha); out_i = ReLU(v_i W_eta + b_eta + alpha_j (v_j W_gamma + b_gamma)).
  CHECK(r.alpha.value()(0, 0) == doctest::Approx(0.6456563062257954).epsilon(1e-14));
  CHECK(r.alpha.value()(1, 0) == doctest::Approx(0.46257015465625045).epsilon(1e-14));
  const Matrix want = mat(2, 2, {0.018714922671874773, 0.7370398634421885, 1.1184844593386931, 0.29173747750968176});
  CHECK((r.states.value() - want).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("zero adjacency leaves only the self term") {
  auto g = bare_graph(3, 2);
  const auto layer = hand_layer();
  const Matrix v = mat(3, 2, {1, -1, 0.5, 2, -3, 0.25});
  ad::Tape t;
  const auto out = propagate(t, g, t.constant(v), layer, false).states.value();
  const Matrix want = ((v * layer.eta.w.value).rowwise() + layer.eta.b.value.row(0)).cwiseMax(0.0);
  CHECK(out == want);
}

TEST_CASE("an edge present in two matrices sends two messages") {
  const auto layer = hand_layer();
  const Matrix v = mat(2, 2, {2, 0.5, 0.5, 2});
  auto once = bare_graph(2, 1);
  link(once.adj_variable, 0, 1);
  auto twice = once;
  link(twice.adj_explicit, 0, 1); // not a valid graph, only a propagation probe
  ad::Tape t;
  const auto a = propagate(t, once, t.constant(v), layer, false);
  const auto b = propagate(t, twice, t.constant(v), layer, false);
  // Pre-activation differs by exactly one extra message; node 1 stays in the linear regime.
  const double alpha0 = a.alpha.value()(0, 0);
  const Matrix msg = alpha0 * ((v.row(0) * layer.gamma[0].w.value) + layer.gamma[0].b.value);
  CHECK((b.states.value().row(1) - a.states.value().row(1) - msg).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("per-type projections") {
  Rng rng(2);
  ReasonerParams p(4, 1, true, rng);
  std::vector<Parameter*> ps;
  p.collect(ps);
  std::vector<std::string> names;
  for (auto* x : ps) names.push_back(x->name);
  CHECK(std::find(names.begin(), names.end(), "reasoner.0.gamma_implicit.w") != names.end());
  CHECK(ps.size() == 10);
  for (auto* x : ps) CHECK(x->group == ParamGroup::Reasoner);

  // With identical projections per type the result equals the shared form.
  ReasonerParams shared(4, 1, false, rng);
  auto& l = p.layers[0];
  l.alpha = shared.layers[0].alpha;
  l.eta = shared.layers[0].eta;
  for (auto& gm : l.gamma) gm = shared.layers[0].gamma[0];
  auto g = random_graph(rng, 6);
  const Matrix v = random_matrix(rng, 6, 4);
  ad::Tape t;
  const auto a = reason(t, g, t.constant(v), shared).value();
  const auto b = reason(t, g, t.constant(v), p).value();
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("token assignment") {
  ad::Tape t;
  const Matrix v = mat(2, 2, {1, 2, 3, 4});
  const auto all0 = assign_tokens(t.constant(v), PositionMap{{0, 0, 0}}).value();
  CHECK(all0.row(0) == all0.row(1));
  CHECK(all0.row(1) == all0.row(2));
  CHECK(assign_tokens(t.constant(v), PositionMap{{0, 1}}).value() == v);
  const PositionMap mixed{{0, 0, 1, 1, 1}};
  const auto m = assign_tokens(t.constant(v), mixed).value();
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) CHECK((m.row(a) == m.row(b)) == (mixed(a) == mixed(b)));
}

TEST_CASE("locality, reach bound and gate range") {
  for (int trial = 0; trial < 30; ++trial) {
    Rng rng(100 + trial);
    const int n = 3 + trial % 6;
    auto g = random_graph(rng, n);
    const int K = 1 + trial % 3;
    ReasonerParams params(3, K, trial % 2 == 0, rng);
    const Matrix v = random_matrix(rng, n, 3);
    const auto dist = distances(g);

    ad::Tape t;
    const Matrix base = reason(t, g, t.constant(v), params).value();
    ad::Var cur = t.constant(v);
    for (const auto& layer : params.layers) {
      auto r = propagate(t, g, cur, layer, params.per_type);
      CHECK((r.alpha.value().array() > 0.0).all());
      CHECK((r.alpha.value().array() < 1.0).all());
      cur = r.states;
    }
    for (int j = 0; j < n; ++j) {
      Matrix w = v;
      w.row(j).array() += 0.7;
      const Matrix out = reason(t, g, t.constant(w), params).value();
      for (int i = 0; i < n; ++i) {
        const int d = dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (d < 0 || d > K) CHECK(out.row(i) == base.row(i));
      }
    }
  }
}

TEST_CASE("permutation equivariance") {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(500 + trial);
    const int n = 5;
    auto g = random_graph(rng, n);
    ReasonerParams params(3, 2, trial % 2 == 1, rng);
    const Matrix v = random_matrix(rng, n, 3);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::PermutationMatrix<DYN> P(n);
    for (int i = 0; i < n; ++i) P.indices()(i) = perm[static_cast<std::size_t>(i)];
    auto h = g;
    h.adj_explicit = P * g.adj_explicit * P.transpose();
    h.adj_implicit = P * g.adj_implicit * P.transpose();
    h.adj_variable = P * g.adj_variable * P.transpose();
    ad::Tape t;
    const Matrix out = reason(t, g, t.constant(v), params).value();
    const Matrix out_p = reason(t, h, t.constant(Matrix(P * v)), params).value();
    CHECK((Matrix(P * out) - out_p).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("init, propagate and assign pass finite differences") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    auto g = bare_graph(3, 2);
    link(g.adj_explicit, 0, 1);
    link(g.adj_variable, 0, 2);
    link(g.adj_variable, 1, 2);
    g.adj_variable = normalize_variable<double>(g.adj_variable);
    const PositionMap pm{{0, 0, 1, 2, 2, 1}};
    ReasonerParams params(3, 2, seed % 2 == 0, rng);
    Parameter tokens{"tokens", ParamGroup::Encoder, normal_init(6, 3, 1.0, rng)};
    std::vector<Parameter*> ps{&tokens};
    params.collect(ps);
    const auto r = gradcheck::check(
        [&](ad::Tape& t) {
          auto v = init_nodes(t.param(tokens), pm, 3);
          return gradcheck::project(assign_tokens(reason(t, g, v, params), pm), seed);
        },
        ps);
    INFO("seed ", seed, " rel ", r.max_rel_error, " a ", r.worst_analytic, " n ", r.worst_numeric);
    CHECK(r.max_rel_error < 1e-4);
  }
}
