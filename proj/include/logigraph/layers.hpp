// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_LAYERS_HPP
#define LOGIGRAPH_LAYERS_HPP

#include "logigraph/tensor.hpp"

#include <random>
#include <string>
#include <vector>

namespace logigraph {

using Rng = std::mt19937_64;

/// Uniform(-bound, bound) init, the usual fan-in scheme.
Matrix uniform_init(Eigen::Index rows, Eigen::Index cols, double bound, Rng& rng);
Matrix normal_init(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng);

struct Linear {
  Parameter w; // in x out
  Parameter b; // 1 x out

  Linear() = default;
  Linear(const std::string& name, ParamGroup g, Eigen::Index in, Eigen::Index out, Rng& rng);
  ad::Var operator()(ad::Tape& t, ad::Var x) const;
  void collect(std::vector<Parameter*>& out);
};

struct LayerNorm {
  Parameter gain;
  Parameter bias;

  LayerNorm() = default;
  LayerNorm(const std::string& name, ParamGroup g, Eigen::Index dim);
  ad::Var operator()(ad::Tape& t, ad::Var x) const;
  void collect(std::vector<Parameter*>& out);
};

struct GruParams {
  Parameter w_ih, w_hh, b_ih, b_hh;

  GruParams() = default;
  GruParams(const std::string& name, ParamGroup g, Eigen::Index in, Eigen::Index hidden, Rng& rng);
  ad::GruVars bind(ad::Tape& t) const;
  void collect(std::vector<Parameter*>& out);
};

/// Two GRUs reading in opposite directions; outputs are concatenated [fwd | bwd].
struct BiGru {
  GruParams fwd, bwd;

  BiGru() = default;
  BiGru(const std::string& name, ParamGroup g, Eigen::Index in, Eigen::Index hidden, Rng& rng);
  ad::Var operator()(ad::Tape& t, ad::Var x) const;
  void collect(std::vector<Parameter*>& out);
};

} // namespace logigraph

#endif // LOGIGRAPH_LAYERS_HPP
