// SPDX-License-Identifier: Apache-2.0
#include "logigraph/graph.hpp"

#include <algorithm>
#include <random>

namespace logigraph {

namespace {

void link(Matrix& m, int i, int j) {
  m(i, j) = 1.0;
  m(j, i) = 1.0;
}

} // namespace

LogicGraph build_graph(const Sample& sample, int candidate, const DelimiterLibrary& lib,
                       const GraphConfig& cfg) {
  auto layout = assemble_sequence(sample, candidate, cfg.max_len);
  LogicGraph g;
  g.tokens = std::move(layout.tokens);
  g.boundary = layout.boundary;

  TokenizedText ctx{{g.tokens.begin(), g.tokens.begin() + static_cast<std::ptrdiff_t>(g.boundary)},
                    Origin::Context};
  TokenizedText cand{{g.tokens.begin() + static_cast<std::ptrdiff_t>(g.boundary), g.tokens.end()},
                     Origin::Candidate};
  auto has_words = [](const TokenizedText& t) {
    return std::any_of(t.tokens.begin(), t.tokens.end(),
                       [](const std::string& tok) { return is_term_token(tok); });
  };
  if (!has_words(ctx)) throw Error("graph", "sample '" + sample.id + "': empty context text");
  if (!has_words(cand))
    throw Error("graph", "sample '" + sample.id + "': empty candidate text for option " +
                             std::to_string(candidate));

  auto seg_ctx = segment(ctx, lib, cfg.granularity);
  auto seg_cand = segment(cand, lib, cfg.granularity);
  g.num_context = static_cast<int>(seg_ctx.edus.size());
  for (auto& e : seg_ctx.edus) g.nodes.push_back(e);
  for (auto e : seg_cand.edus) {
    e.id += g.num_context;
    e.start += g.boundary;
    e.end += g.boundary;
    if (e.leading_connective) {
      e.leading_connective->start += g.boundary;
      e.leading_connective->end += g.boundary;
    }
    g.nodes.push_back(std::move(e));
  }
  g.pos_map.node_of.resize(g.tokens.size());
  for (const auto& e : g.nodes)
    for (std::size_t l = e.start; l < e.end; ++l) g.pos_map.node_of[l] = e.id;

  const int N = g.num_nodes();
  g.adj_explicit = Matrix::Zero(N, N);
  g.adj_implicit = Matrix::Zero(N, N);
  for (int i = 1; i < N; ++i) {
    const auto& e = g.nodes[static_cast<std::size_t>(i)];
    if (!e.leading_connective || !g.same_set(i - 1, i)) continue;
    link(e.leading_connective->kind == DelimiterKind::Explicit ? g.adj_explicit : g.adj_implicit,
         i - 1, i);
  }

  const StopwordSet& stops = cfg.stopwords ? *cfg.stopwords : default_stopwords();
  g.terms = detect_terms(g.nodes, g.tokens, stops, cfg.max_ngram);

  Matrix raw = Matrix::Zero(N, N);
  for (const auto& t : g.terms) {
    const auto nodes = t.nodes();
    for (int a : nodes)
      for (int b : nodes)
        if (!g.same_set(a, b)) raw(a, b) = 1.0;
  }
  g.adj_variable = normalize_variable<double>(raw);
  return g;
}

Ablation parse_edge_mode(std::string_view spec) {
  Ablation a;
  if (spec == "paper") a.mode = EdgeMode::Paper;
  else if (spec == "full") a.mode = EdgeMode::FullyConnected;
  else if (spec == "single") a.mode = EdgeMode::SingleEdgeType;
  else if (spec == "random") a.mode = EdgeMode::RandomEdges;
  else if (spec.starts_with("random:")) {
    a.mode = EdgeMode::RandomEdges;
    std::string num(spec.substr(7));
    std::size_t used = 0;
    double p = 0;
    try {
      p = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != num.size() || num.empty())
      throw Error("usage", "bad random edge rate '" + num + "'");
    if (!(p >= 0.0 && p <= 1.0)) throw Error("usage", "random edge rate must lie in [0, 1]");
    a.p = p;
  } else {
    throw Error("usage", "unknown edge mode '" + std::string(spec) + "'");
  }
  return a;
}

double connective_density(const LogicGraph& g) {
  const int N = g.num_nodes();
  if (N < 2) return 0.0;
  int edges = 0, pairs = 0;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      if (!g.same_set(i, j)) continue;
      ++pairs;
      if (g.adj_explicit(i, j) != 0.0 || g.adj_implicit(i, j) != 0.0) ++edges;
    }
  return pairs == 0 ? 0.0 : static_cast<double>(edges) / pairs;
}

LogicGraph ablate(LogicGraph g, const Ablation& a) {
  const int N = g.num_nodes();
  switch (a.mode) {
  case EdgeMode::Paper:
    break;
  case EdgeMode::FullyConnected:
    g.adj_explicit = Matrix::Ones(N, N);
    g.adj_explicit.diagonal().setZero();
    g.adj_implicit.setZero();
    break;
  case EdgeMode::RandomEdges: {
    const double p = a.p.value_or(connective_density(g));
    if (!(p >= 0.0 && p <= 1.0)) throw Error("usage", "random edge rate must lie in [0, 1]");
    std::mt19937_64 rng(a.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    g.adj_explicit.setZero();
    g.adj_implicit.setZero();
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j)
        if (g.same_set(i, j) && u(rng) < p) link(g.adj_explicit, i, j);
    break;
  }
  case EdgeMode::SingleEdgeType:
    g.adj_explicit = g.adj_explicit.cwiseMax(g.adj_implicit);
    g.adj_implicit.setZero();
    break;
  }
  return g;
}

Eigen::Matrix<bool, DYN, DYN> edge_support(const LogicGraph& g) {
  return (g.adj_explicit.array() != 0.0) || (g.adj_implicit.array() != 0.0) ||
         (g.adj_variable.array() != 0.0);
}

std::string node_text(const LogicGraph& g, int node) {
  const auto& e = g.nodes[static_cast<std::size_t>(node)];
  std::string s;
  for (std::size_t l = e.start; l < e.end; ++l) {
    if (l > e.start) s += ' ';
    s += g.tokens[l];
  }
  return s;
}

} // namespace logigraph
