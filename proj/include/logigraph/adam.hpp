// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_ADAM_HPP
#define LOGIGRAPH_ADAM_HPP

#include "logigraph/tensor.hpp"

namespace logigraph {

struct AdamState {
  Matrix m;
  Matrix v;
};

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One Adam update with bias correction and decoupled weight decay:
///   p <- p * (1 - lr * wd) - lr * m_hat / (sqrt(v_hat) + eps).
/// `t` is the 1-based update count. Throws on a non-finite gradient.
void adam_step(Parameter& p, const Matrix& grad, AdamState& state, long t, double lr, double wd,
               const AdamHyper& h = {});

/// Linear ramp from 0 over `warmup` steps, then constant. `step` counts
/// completed updates, so the very first update uses lr 0 when warmup > 0.
double warmup_lr(double base, long step, long warmup);

} // namespace logigraph

#endif // LOGIGRAPH_ADAM_HPP
