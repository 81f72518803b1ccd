// SPDX-License-Identifier: Apache-2.0
#include "logigraph/layers.hpp"

#include <cmath>

namespace logigraph {

Matrix uniform_init(Eigen::Index rows, Eigen::Index cols, double bound, Rng& rng) {
  std::uniform_real_distribution<double> u(-bound, bound);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

Matrix normal_init(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng) {
  std::normal_distribution<double> n(0.0, stddev);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

Linear::Linear(const std::string& name, ParamGroup g, Eigen::Index in, Eigen::Index out, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  w = {name + ".w", g, uniform_init(in, out, bound, rng)};
  b = {name + ".b", g, uniform_init(1, out, bound, rng)};
}

ad::Var Linear::operator()(ad::Tape& t, ad::Var x) const {
  return ad::linear(x, t.param(w), t.param(b));
}

void Linear::collect(std::vector<Parameter*>& out) {
  out.push_back(&w);
  out.push_back(&b);
}

LayerNorm::LayerNorm(const std::string& name, ParamGroup g, Eigen::Index dim) {
  gain = {name + ".gain", g, Matrix::Ones(1, dim)};
  bias = {name + ".bias", g, Matrix::Zero(1, dim)};
}

ad::Var LayerNorm::operator()(ad::Tape& t, ad::Var x) const {
  return ad::layer_norm(x, t.param(gain), t.param(bias));
}

void LayerNorm::collect(std::vector<Parameter*>& out) {
  out.push_back(&gain);
  out.push_back(&bias);
}

GruParams::GruParams(const std::string& name, ParamGroup g, Eigen::Index in, Eigen::Index hidden,
                     Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  w_ih = {name + ".w_ih", g, uniform_init(in, 3 * hidden, bound, rng)};
  w_hh = {name + ".w_hh", g, uniform_init(hidden, 3 * hidden, bound, rng)};
  b_ih = {name + ".b_ih", g, uniform_init(1, 3 * hidden, bound, rng)};
  b_hh = {name + ".b_hh", g, uniform_init(1, 3 * hidden, bound, rng)};
}

ad::GruVars GruParams::bind(ad::Tape& t) const {
  return {t.param(w_ih), t.param(w_hh), t.param(b_ih), t.param(b_hh)};
}

void GruParams::collect(std::vector<Parameter*>& out) {
  for (Parameter* p : {&w_ih, &w_hh, &b_ih, &b_hh}) out.push_back(p);
}

BiGru::BiGru(const std::string& name, ParamGroup g, Eigen::Index in, Eigen::Index hidden, Rng& rng)
    : fwd(name + ".fwd", g, in, hidden, rng), bwd(name + ".bwd", g, in, hidden, rng) {}

ad::Var BiGru::operator()(ad::Tape& t, ad::Var x) const {
  const ad::Var parts[] = {ad::gru_sequence(x, fwd.bind(t), false),
                           ad::gru_sequence(x, bwd.bind(t), true)};
  return ad::concat_cols(parts);
}

void BiGru::collect(std::vector<Parameter*>& out) {
  fwd.collect(out);
  bwd.collect(out);
}

} // namespace logigraph
