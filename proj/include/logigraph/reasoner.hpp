// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_REASONER_HPP
#define LOGIGRAPH_REASONER_HPP

#include "logigraph/graph.hpp"
#include "logigraph/layers.hpp"

#include <array>
#include <vector>

namespace logigraph {

/// One round of node-weighted message passing.
struct ReasonerLayer {
  Linear alpha;                // b -> 1
  std::array<Linear, 3> gamma; // message projection; only [0] is used when shared
  Linear eta;                  // b -> b
};

struct ReasonerParams {
  std::vector<ReasonerLayer> layers;
  /// Separate message projections for explicit, implicit and variable edges.
  bool per_type = false;

  ReasonerParams() = default;
  ReasonerParams(int dim, int num_layers, bool per_type, Rng& rng);
  void collect(std::vector<Parameter*>& out);
};

/// v_n = sum of the token rows mapped to node n.
ad::Var init_nodes(ad::Var tokens, const PositionMap& pos_map, int num_nodes);

struct PropagateResult {
  ad::Var states; // N x b
  ad::Var alpha;  // N x 1
};

/// v'_i = ReLU(W_eta v_i + b_eta + (1/|N_i|) sum_j sum_E alpha_j A^E_ji (W_gamma v_j + b_gamma)).
/// |N_i| counts distinct neighbours over all three edge types; isolated nodes get no message.
PropagateResult propagate(ad::Tape& tape, const LogicGraph& g, ad::Var states, const ReasonerLayer& layer,
                          bool per_type);

/// Row l of the result is the state of the node holding token l.
ad::Var assign_tokens(ad::Var states, const PositionMap& pos_map);

/// Applies every layer in order to the initial node states.
ad::Var reason(ad::Tape& tape, const LogicGraph& g, ad::Var initial_states, const ReasonerParams& params);

} // namespace logigraph

#endif // LOGIGRAPH_REASONER_HPP
