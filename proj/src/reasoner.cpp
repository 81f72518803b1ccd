// SPDX-License-Identifier: Apache-2.0
#include "logigraph/reasoner.hpp"

namespace logigraph {

ReasonerParams::ReasonerParams(int dim, int num_layers, bool per_type_, Rng& rng) : per_type(per_type_) {
  if (num_layers < 1) throw Error("config", "the reasoner needs at least one layer");
  for (int k = 0; k < num_layers; ++k) {
    const std::string p = "reasoner." + std::to_string(k);
    ReasonerLayer layer;
    layer.alpha = Linear(p + ".alpha", ParamGroup::Reasoner, dim, 1, rng);
    const int n_gamma = per_type ? 3 : 1;
    static const char* kSuffix[] = {".gamma_explicit", ".gamma_implicit", ".gamma_variable"};
    for (int e = 0; e < n_gamma; ++e)
      layer.gamma[static_cast<std::size_t>(e)] =
          Linear(p + (per_type ? kSuffix[e] : ".gamma"), ParamGroup::Reasoner, dim, dim, rng);
    layer.eta = Linear(p + ".eta", ParamGroup::Reasoner, dim, dim, rng);
    layers.push_back(std::move(layer));
  }
}

void ReasonerParams::collect(std::vector<Parameter*>& out) {
  for (auto& l : layers) {
    l.alpha.collect(out);
    for (int e = 0; e < (per_type ? 3 : 1); ++e) l.gamma[static_cast<std::size_t>(e)].collect(out);
    l.eta.collect(out);
  }
}

ad::Var init_nodes(ad::Var tokens, const PositionMap& pos_map, int num_nodes) {
  if (static_cast<Eigen::Index>(pos_map.size()) != tokens.rows())
    throw Error("shape", "position map covers " + std::to_string(pos_map.size()) + " tokens, embeddings have " +
                             std::to_string(tokens.rows()));
  return ad::segment_sum(tokens, pos_map.node_of, num_nodes);
}

PropagateResult propagate(ad::Tape& tape, const LogicGraph& g, ad::Var states, const ReasonerLayer& layer,
                          bool per_type) {
  const int n = g.num_nodes();
  if (states.rows() != n) throw Error("shape", "node state rows do not match the graph");
  const Matrix* adj[] = {&g.adj_explicit, &g.adj_implicit, &g.adj_variable};

  Vec<double> inv_deg(n);
  for (int i = 0; i < n; ++i) {
    int deg = 0;
    for (int j = 0; j < n; ++j)
      if ((*adj[0])(j, i) != 0.0 || (*adj[1])(j, i) != 0.0 || (*adj[2])(j, i) != 0.0) ++deg;
    inv_deg(i) = deg ? 1.0 / deg : 0.0;
  }

  ad::Var alpha = ad::sigmoid(layer.alpha(tape, states));
  ad::Var messages;
  if (!per_type) {
    Matrix agg = inv_deg.asDiagonal() * (adj[0]->transpose() + adj[1]->transpose() + adj[2]->transpose());
    messages = ad::matmul(tape.constant(std::move(agg)), ad::mul_rows(layer.gamma[0](tape, states), alpha));
  } else {
    for (std::size_t e = 0; e < 3; ++e) {
      Matrix agg = inv_deg.asDiagonal() * adj[e]->transpose();
      ad::Var m = ad::matmul(tape.constant(std::move(agg)), ad::mul_rows(layer.gamma[e](tape, states), alpha));
      messages = messages.valid() ? ad::add(messages, m) : m;
    }
  }
  return {ad::relu(ad::add(layer.eta(tape, states), messages)), alpha};
}

ad::Var assign_tokens(ad::Var states, const PositionMap& pos_map) {
  return ad::gather_rows(states, pos_map.node_of);
}

ad::Var reason(ad::Tape& tape, const LogicGraph& g, ad::Var v, const ReasonerParams& params) {
  for (const auto& layer : params.layers) v = propagate(tape, g, v, layer, params.per_type).states;
  return v;
}

} // namespace logigraph
