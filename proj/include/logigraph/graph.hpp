// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_GRAPH_HPP
#define LOGIGRAPH_GRAPH_HPP

#include "logigraph/sample.hpp"
#include "logigraph/segmentation.hpp"
#include "logigraph/topic_terms.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace logigraph {

struct GraphConfig {
  Granularity granularity = Granularity::Edu;
  int max_len = 256;
  int max_ngram = 4;
  const StopwordSet* stopwords = nullptr; // nullptr -> built-in list
};

/// Discourse-aware logic graph for one (sample, candidate) pair.
///
/// Nodes 0..num_context-1 come from the context text, the rest from the
/// candidate text. Connective adjacencies are block diagonal over that split;
/// the variable adjacency lives only in the off-diagonal blocks and is
/// row-normalized.
struct LogicGraph {
  std::vector<std::string> tokens;
  std::size_t boundary = 0;
  std::vector<Edu> nodes;
  int num_context = 0;
  std::vector<TopicTerm> terms;
  Matrix adj_explicit;
  Matrix adj_implicit;
  Matrix adj_variable;
  PositionMap pos_map;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  bool is_context(int i) const { return i < num_context; }
  bool same_set(int i, int j) const { return is_context(i) == is_context(j); }
};

/// Segments both sides of S^c, tags topic terms across the whole sequence and
/// wires explicit, implicit and variable edges.
LogicGraph build_graph(const Sample& sample, int candidate, const DelimiterLibrary& lib,
                       const GraphConfig& cfg = {});

/// Row-wise degree normalization D^{-1} B; zero rows stay zero.
template <typename Scalar>
Mat<Scalar> normalize_variable(const MatRef<Scalar>& raw) {
  Mat<Scalar> out = raw;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const Scalar deg = out.row(i).sum();
    if (deg != Scalar(0)) out.row(i) /= deg;
  }
  return out;
}

enum class EdgeMode { Paper, FullyConnected, RandomEdges, SingleEdgeType };

struct Ablation {
  EdgeMode mode = EdgeMode::Paper;
  /// Bernoulli rate for RandomEdges; unset -> connective edge density of the graph.
  std::optional<double> p;
  std::uint64_t seed = 0;
};

/// Parses "paper", "full", "single", "random" or "random:<p>".
Ablation parse_edge_mode(std::string_view spec);

/// Fraction of same-set node pairs joined by a connective edge.
double connective_density(const LogicGraph& g);

/// Rewires connective edges. Variable edges are left untouched. Random edges
/// are drawn over same-set pairs only; fully connected also links across sets.
LogicGraph ablate(LogicGraph graph, const Ablation& ablation);

/// Union of the three edge supports.
Eigen::Matrix<bool, DYN, DYN> edge_support(const LogicGraph& g);

std::string graph_to_json(const LogicGraph& g, int indent = -1);
std::string graph_to_dot(const LogicGraph& g);

/// Node text joined from its tokens.
std::string node_text(const LogicGraph& g, int node);

} // namespace logigraph

#endif // LOGIGRAPH_GRAPH_HPP
