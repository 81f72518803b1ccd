// SPDX-License-Identifier: Apache-2.0
#include "logigraph/adam.hpp"

#include <cmath>

namespace logigraph {

void adam_step(Parameter& p, const Matrix& grad, AdamState& s, long t, double lr, double wd, const AdamHyper& h) {
  if (grad.rows() != p.value.rows() || grad.cols() != p.value.cols())
    throw Error("shape", "gradient shape does not match parameter " + p.name);
  if (!grad.allFinite()) throw Error("nan", "non-finite gradient in parameter " + p.name);
  if (s.m.size() == 0) {
    s.m = Matrix::Zero(p.value.rows(), p.value.cols());
    s.v = Matrix::Zero(p.value.rows(), p.value.cols());
  }
  s.m = h.beta1 * s.m + (1.0 - h.beta1) * grad;
  s.v = h.beta2 * s.v + (1.0 - h.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(h.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(h.beta2, static_cast<double>(t));
  if (wd != 0.0) p.value *= 1.0 - lr * wd;
  p.value.array() -= lr * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + h.eps);
}

double warmup_lr(double base, long step, long warmup) {
  if (warmup <= 0 || step >= warmup) return base;
  return base * static_cast<double>(step) / static_cast<double>(warmup);
}

} // namespace logigraph
