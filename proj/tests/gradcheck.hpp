// SPDX-License-Identifier: Apache-2.0
// Central finite-difference gradient checking, shared by unit and acceptance tests.
#ifndef LOGIGRAPH_TESTS_GRADCHECK_HPP
#define LOGIGRAPH_TESTS_GRADCHECK_HPP

#include "logigraph/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <vector>

namespace gradcheck {

using namespace logigraph;

/// Builds a scalar loss; called once per evaluation on a fresh tape.
using Builder = std::function<ad::Var(ad::Tape&)>;

struct Result {
  double max_rel_error = 0.0;
  /// |a - n| / max(1, |a|, |n|): absolute below 1, relative above.
  double max_mixed_error = 0.0;
  int evaluations = 0;
  // Worst entry, for diagnostics.
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

inline double loss_value(const Builder& f) {
  ad::Tape tape;
  return f(tape).item();
}

/// Elementwise relative error |a - n| / max(|a|, |n|, 1e-8); the result reports the worst entry.
inline Result check(const Builder& f, const std::vector<Parameter*>& ps, double h = 1e-3) {
  std::map<const Parameter*, Matrix> analytic;
  for (auto* p : ps) analytic[p] = Matrix::Zero(p->value.rows(), p->value.cols());
  {
    ad::Tape tape;
    auto loss = f(tape);
    tape.backward(loss);
    tape.for_each_param_grad(
        [&](const Parameter& p, const Matrix& g) {
          if (auto it = analytic.find(&p); it != analytic.end()) it->second += g;
        },
        [&](const Parameter& p, int row, const Matrix& g) {
          if (auto it = analytic.find(&p); it != analytic.end()) it->second.row(row) += g;
        });
  }
  Result r;
  for (auto* p : ps) {
    Matrix numeric(p->value.rows(), p->value.cols());
    for (Eigen::Index i = 0; i < p->value.size(); ++i) {
      double& x = p->value.data()[i];
      const double keep = x;
      x = keep + h;
      const double up = loss_value(f);
      x = keep - h;
      const double down = loss_value(f);
      x = keep;
      numeric.data()[i] = (up - down) / (2 * h);
      r.evaluations += 2;
    }
    const Matrix& a = analytic[p];
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double x = a.data()[i], y = numeric.data()[i];
      const double denom = std::max({std::abs(x), std::abs(y), 1e-8});
      r.max_mixed_error =
          std::max(r.max_mixed_error, std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1.0}));
      if (std::abs(x - y) / denom > r.max_rel_error) {
        r.max_rel_error = std::abs(x - y) / denom;
        r.worst_analytic = x;
        r.worst_numeric = y;
      }
    }
  }
  return r;
}

inline Parameter random_param(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                              double scale = 1.0, const char* name = "x") {
  std::normal_distribution<double> n(0.0, scale);
  Parameter p{name, ParamGroup::Fusion, Matrix(rows, cols)};
  for (Eigen::Index i = 0; i < p.value.size(); ++i) p.value.data()[i] = n(rng);
  return p;
}

/// Reduces any output to a scalar through a fixed random projection so every
/// output entry carries a distinct weight.
inline ad::Var project(ad::Var out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix w(out.rows(), out.cols());
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = n(rng);
  return ad::sum(ad::mul(out, out.tape->constant(std::move(w))));
}

} // namespace gradcheck

#endif // LOGIGRAPH_TESTS_GRADCHECK_HPP
