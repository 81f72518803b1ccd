// SPDX-License-Identifier: Apache-2.0
#include "logigraph/tensor.hpp"

#include <cmath>
#include <numbers>

namespace logigraph {

const char* to_string(ParamGroup g) {
  switch (g) {
  case ParamGroup::Encoder: return "encoder";
  case ParamGroup::Reasoner: return "reasoner";
  case ParamGroup::Fusion: return "fusion";
  }
  return "?";
}

namespace ad {

const Matrix Tape::kEmpty;

const Matrix& Var::value() const { return tape->value(id); }
const Matrix& Var::grad() const { return tape->grad(id); }

Var Tape::push(Matrix value, bool requires_grad, Backprop backprop) {
  Node n;
  n.own = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backprop = std::move(backprop);
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<int>(nodes_.size() - 1)};
}

Var Tape::constant(Matrix value) { return push(std::move(value), false, nullptr); }

Var Tape::variable(Matrix value) {
  Var v = push(std::move(value), true, nullptr);
  nodes_.back().leaf = true;
  return v;
}

Var Tape::param(const Parameter& p) {
  Node n;
  n.view = &p.value;
  n.requires_grad = true;
  n.leaf = true;
  n.param = &p;
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<int>(nodes_.size() - 1)};
}

const Matrix& Tape::value(int id) const { return nodes_[static_cast<std::size_t>(id)].value(); }

const Matrix& Tape::grad(int id) const {
  const auto& g = nodes_[static_cast<std::size_t>(id)].grad;
  return g.size() ? g : kEmpty;
}

Matrix& Tape::grad_mut(int id) {
  auto& n = nodes_[static_cast<std::size_t>(id)];
  if (n.grad.size() == 0) n.grad = Matrix::Zero(n.value().rows(), n.value().cols());
  return n.grad;
}

bool Tape::any_requires_grad(std::initializer_list<Var> vs) const {
  for (const auto& v : vs)
    if (requires_grad(v.id)) return true;
  return false;
}

void Tape::add_sparse_row_grad(const Parameter* p, int row, const Eigen::Ref<const Matrix>& g) {
  sparse_.push_back({p, row, g});
}

void Tape::backward(Var loss) {
  if (loss.tape != this) throw Error("autodiff", "loss belongs to another tape");
  if (value(loss.id).size() != 1) throw Error("autodiff", "backward() needs a 1x1 loss");
  for (auto& n : nodes_)
    if (!n.leaf) n.grad.resize(0, 0);
  grad_mut(loss.id)(0, 0) += 1.0;
  for (int i = loss.id; i >= 0; --i) {
    auto& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.requires_grad || n.grad.size() == 0 || !n.backprop) continue;
    n.backprop(*this, i);
  }
}

void Tape::zero_grad() {
  for (auto& n : nodes_) n.grad.resize(0, 0);
  sparse_.clear();
}

void Tape::for_each_param_grad(
    const std::function<void(const Parameter&, const Matrix&)>& dense,
    const std::function<void(const Parameter&, int, const Matrix&)>& sparse) const {
  for (const auto& n : nodes_)
    if (n.param && n.grad.size()) dense(*n.param, n.grad);
  for (const auto& s : sparse_) sparse(*s.param, s.row, s.grad);
}

namespace {

void check_same_shape(Var a, Var b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error("shape", std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
}

void check_same_tape(Var a, Var b) {
  if (a.tape != b.tape) throw Error("autodiff", "operands live on different tapes");
}

} // namespace

Var matmul(Var a, Var b) {
  check_same_tape(a, b);
  if (a.cols() != b.rows())
    throw Error("shape", "matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                             std::to_string(b.rows()) + " differ");
  Tape& t = *a.tape;
  Matrix out = a.value() * b.value();
  return t.push(std::move(out), t.any_requires_grad({a, b}), [a, b](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(a.id)) t.grad_mut(a.id).noalias() += g * t.value(b.id).transpose();
    if (t.requires_grad(b.id)) t.grad_mut(b.id).noalias() += t.value(a.id).transpose() * g;
  });
}

Var add(Var a, Var b) {
  check_same_tape(a, b);
  check_same_shape(a, b, "add");
  Tape& t = *a.tape;
  return t.push(a.value() + b.value(), t.any_requires_grad({a, b}), [a, b](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(a.id)) t.grad_mut(a.id) += g;
    if (t.requires_grad(b.id)) t.grad_mut(b.id) += g;
  });
}

Var sub(Var a, Var b) {
  check_same_tape(a, b);
  check_same_shape(a, b, "sub");
  Tape& t = *a.tape;
  return t.push(a.value() - b.value(), t.any_requires_grad({a, b}), [a, b](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(a.id)) t.grad_mut(a.id) += g;
    if (t.requires_grad(b.id)) t.grad_mut(b.id) -= g;
  });
}

Var mul(Var a, Var b) {
  check_same_tape(a, b);
  check_same_shape(a, b, "mul");
  Tape& t = *a.tape;
  Matrix out = a.value().cwiseProduct(b.value());
  return t.push(std::move(out), t.any_requires_grad({a, b}), [a, b](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(a.id)) t.grad_mut(a.id) += g.cwiseProduct(t.value(b.id));
    if (t.requires_grad(b.id)) t.grad_mut(b.id) += g.cwiseProduct(t.value(a.id));
  });
}

Var scale(Var a, double s) {
  Tape& t = *a.tape;
  return t.push(a.value() * s, t.requires_grad(a.id),
                [a, s](Tape& t, int self) { t.grad_mut(a.id) += s * t.grad(self); });
}

Var add_row(Var a, Var row) {
  check_same_tape(a, row);
  if (row.rows() != 1 || row.cols() != a.cols()) throw Error("shape", "add_row: bad row shape");
  Tape& t = *a.tape;
  Matrix out = a.value().rowwise() + row.value().row(0);
  return t.push(std::move(out), t.any_requires_grad({a, row}), [a, row](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(a.id)) t.grad_mut(a.id) += g;
    if (t.requires_grad(row.id)) t.grad_mut(row.id) += g.colwise().sum();
  });
}

Var linear(Var x, Var w, Var b) {
  check_same_tape(x, w);
  check_same_tape(x, b);
  if (x.cols() != w.rows() || b.rows() != 1 || b.cols() != w.cols())
    throw Error("shape", "linear: incompatible shapes");
  Tape& t = *x.tape;
  Matrix out = x.value() * w.value();
  out.rowwise() += b.value().row(0);
  return t.push(std::move(out), t.any_requires_grad({x, w, b}), [x, w, b](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(x.id)) t.grad_mut(x.id).noalias() += g * t.value(w.id).transpose();
    if (t.requires_grad(w.id)) t.grad_mut(w.id).noalias() += t.value(x.id).transpose() * g;
    if (t.requires_grad(b.id)) t.grad_mut(b.id) += g.colwise().sum();
  });
}

Var mul_rows(Var x, Var s) {
  check_same_tape(x, s);
  if (s.cols() != 1 || s.rows() != x.rows()) throw Error("shape", "mul_rows: bad scale shape");
  Tape& t = *x.tape;
  Matrix out = s.value().col(0).asDiagonal() * x.value();
  return t.push(std::move(out), t.any_requires_grad({x, s}), [x, s](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(x.id)) t.grad_mut(x.id) += t.value(s.id).col(0).asDiagonal() * g;
    if (t.requires_grad(s.id))
      t.grad_mut(s.id).col(0) += g.cwiseProduct(t.value(x.id)).rowwise().sum();
  });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw Error("shape", "concat_cols: no inputs");
  Tape& t = *parts[0].tape;
  const auto rows = parts[0].rows();
  Eigen::Index cols = 0;
  bool rg = false;
  for (const auto& p : parts) {
    check_same_tape(parts[0], p);
    if (p.rows() != rows) throw Error("shape", "concat_cols: row counts differ");
    cols += p.cols();
    rg = rg || t.requires_grad(p.id);
  }
  Matrix out(rows, cols);
  Eigen::Index c = 0;
  for (const auto& p : parts) {
    out.middleCols(c, p.cols()) = p.value();
    c += p.cols();
  }
  std::vector<Var> ps(parts.begin(), parts.end());
  return t.push(std::move(out), rg, [ps](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    Eigen::Index c = 0;
    for (const auto& p : ps) {
      const auto w = t.value(p.id).cols();
      if (t.requires_grad(p.id)) t.grad_mut(p.id) += g.middleCols(c, w);
      c += w;
    }
  });
}

Var concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw Error("shape", "concat_rows: no inputs");
  Tape& t = *parts[0].tape;
  const auto cols = parts[0].cols();
  Eigen::Index rows = 0;
  bool rg = false;
  for (const auto& p : parts) {
    check_same_tape(parts[0], p);
    if (p.cols() != cols) throw Error("shape", "concat_rows: column counts differ");
    rows += p.rows();
    rg = rg || t.requires_grad(p.id);
  }
  Matrix out(rows, cols);
  Eigen::Index r = 0;
  for (const auto& p : parts) {
    out.middleRows(r, p.rows()) = p.value();
    r += p.rows();
  }
  std::vector<Var> ps(parts.begin(), parts.end());
  return t.push(std::move(out), rg, [ps](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    Eigen::Index r = 0;
    for (const auto& p : ps) {
      const auto h = t.value(p.id).rows();
      if (t.requires_grad(p.id)) t.grad_mut(p.id) += g.middleRows(r, h);
      r += h;
    }
  });
}

Var slice_rows(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.rows()) throw Error("shape", "slice_rows: out of range");
  Tape& t = *a.tape;
  return t.push(a.value().middleRows(start, count), t.requires_grad(a.id),
                [a, start, count](Tape& t, int self) {
                  t.grad_mut(a.id).middleRows(start, count) += t.grad(self);
                });
}

Var slice_cols(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.cols()) throw Error("shape", "slice_cols: out of range");
  Tape& t = *a.tape;
  return t.push(a.value().middleCols(start, count), t.requires_grad(a.id),
                [a, start, count](Tape& t, int self) {
                  t.grad_mut(a.id).middleCols(start, count) += t.grad(self);
                });
}

Var sum(Var a) {
  Tape& t = *a.tape;
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return t.push(std::move(out), t.requires_grad(a.id), [a](Tape& t, int self) {
    t.grad_mut(a.id).array() += t.grad(self)(0, 0);
  });
}

Var col_sum(Var a) {
  Tape& t = *a.tape;
  Matrix out = a.value().colwise().sum();
  return t.push(std::move(out), t.requires_grad(a.id), [a](Tape& t, int self) {
    t.grad_mut(a.id).rowwise() += t.grad(self).row(0);
  });
}

Var gather_rows(Var x, std::span<const int> index) {
  Tape& t = *x.tape;
  const Matrix& xv = x.value();
  Matrix out(static_cast<Eigen::Index>(index.size()), xv.cols());
  for (std::size_t l = 0; l < index.size(); ++l) {
    if (index[l] < 0 || index[l] >= xv.rows()) throw Error("shape", "gather_rows: index out of range");
    out.row(static_cast<Eigen::Index>(l)) = xv.row(index[l]);
  }
  std::vector<int> idx(index.begin(), index.end());
  return t.push(std::move(out), t.requires_grad(x.id), [x, idx](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    Matrix& gx = t.grad_mut(x.id);
    for (std::size_t l = 0; l < idx.size(); ++l) gx.row(idx[l]) += g.row(static_cast<Eigen::Index>(l));
  });
}

Var segment_sum(Var x, std::span<const int> index, Eigen::Index count) {
  Tape& t = *x.tape;
  const Matrix& xv = x.value();
  if (static_cast<Eigen::Index>(index.size()) != xv.rows())
    throw Error("shape", "segment_sum: index length must equal row count");
  Matrix out = Matrix::Zero(count, xv.cols());
  for (std::size_t l = 0; l < index.size(); ++l) {
    if (index[l] < 0 || index[l] >= count) throw Error("shape", "segment_sum: index out of range");
    out.row(index[l]) += xv.row(static_cast<Eigen::Index>(l));
  }
  std::vector<int> idx(index.begin(), index.end());
  return t.push(std::move(out), t.requires_grad(x.id), [x, idx](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    Matrix& gx = t.grad_mut(x.id);
    for (std::size_t l = 0; l < idx.size(); ++l) gx.row(static_cast<Eigen::Index>(l)) += g.row(idx[l]);
  });
}

Var embedding(Tape& tape, const Parameter& table, std::span<const int> ids) {
  Matrix out(static_cast<Eigen::Index>(ids.size()), table.value.cols());
  for (std::size_t l = 0; l < ids.size(); ++l) {
    if (ids[l] < 0 || ids[l] >= table.value.rows())
      throw Error("shape", "embedding: id " + std::to_string(ids[l]) + " out of range");
    out.row(static_cast<Eigen::Index>(l)) = table.value.row(ids[l]);
  }
  std::vector<int> idx(ids.begin(), ids.end());
  const Parameter* p = &table;
  return tape.push(std::move(out), true, [p, idx](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    for (std::size_t l = 0; l < idx.size(); ++l)
      t.add_sparse_row_grad(p, idx[l], g.row(static_cast<Eigen::Index>(l)));
  });
}

Var sigmoid(Var x) {
  Tape& t = *x.tape;
  Matrix out = x.value().unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  return t.push(std::move(out), t.requires_grad(x.id), [x](Tape& t, int self) {
    const Matrix& y = t.value(self);
    t.grad_mut(x.id).array() += t.grad(self).array() * y.array() * (1.0 - y.array());
  });
}

Var tanh(Var x) {
  Tape& t = *x.tape;
  Matrix out = x.value().array().tanh().matrix();
  return t.push(std::move(out), t.requires_grad(x.id), [x](Tape& t, int self) {
    const Matrix& y = t.value(self);
    t.grad_mut(x.id).array() += t.grad(self).array() * (1.0 - y.array().square());
  });
}

Var relu(Var x) {
  Tape& t = *x.tape;
  Matrix out = x.value().cwiseMax(0.0);
  return t.push(std::move(out), t.requires_grad(x.id), [x](Tape& t, int self) {
    t.grad_mut(x.id).array() +=
        t.grad(self).array() * (t.value(x.id).array() > 0.0).cast<double>();
  });
}

Var gelu(Var x) {
  Tape& t = *x.tape;
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  Matrix out = x.value().unaryExpr(
      [](double v) { return 0.5 * v * (1.0 + std::erf(v * inv_sqrt2)); });
  return t.push(std::move(out), t.requires_grad(x.id), [x](Tape& t, int self) {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779;
    const Matrix d = t.value(x.id).unaryExpr([](double v) {
      return 0.5 * (1.0 + std::erf(v * inv_sqrt2)) + v * inv_sqrt_2pi * std::exp(-0.5 * v * v);
    });
    t.grad_mut(x.id).array() += t.grad(self).array() * d.array();
  });
}

Var log(Var x) {
  Tape& t = *x.tape;
  Matrix out = x.value().array().log().matrix();
  return t.push(std::move(out), t.requires_grad(x.id), [x](Tape& t, int self) {
    t.grad_mut(x.id).array() += t.grad(self).array() / t.value(x.id).array();
  });
}

Var layer_norm(Var x, Var gain, Var bias, double eps) {
  check_same_tape(x, gain);
  check_same_tape(x, bias);
  const Matrix& xv = x.value();
  const auto n = xv.cols();
  if (gain.rows() != 1 || gain.cols() != n || bias.rows() != 1 || bias.cols() != n)
    throw Error("shape", "layer_norm: gain/bias must be 1 x cols");
  Tape& t = *x.tape;
  Matrix xhat(xv.rows(), n);
  Vec<double> inv(xv.rows());
  for (Eigen::Index r = 0; r < xv.rows(); ++r) {
    const double mu = xv.row(r).mean();
    const double var = (xv.row(r).array() - mu).square().mean();
    inv(r) = 1.0 / std::sqrt(var + eps);
    xhat.row(r) = (xv.row(r).array() - mu) * inv(r);
  }
  Matrix out = xhat.array().rowwise() * gain.value().row(0).array();
  out.rowwise() += bias.value().row(0);
  return t.push(std::move(out), t.any_requires_grad({x, gain, bias}),
                [x, gain, bias, xhat = std::move(xhat), inv = std::move(inv)](Tape& t, int self) {
                  const Matrix& g = t.grad(self);
                  if (t.requires_grad(gain.id))
                    t.grad_mut(gain.id) += g.cwiseProduct(xhat).colwise().sum();
                  if (t.requires_grad(bias.id)) t.grad_mut(bias.id) += g.colwise().sum();
                  if (t.requires_grad(x.id)) {
                    const Matrix dxhat = g.array().rowwise() * t.value(gain.id).row(0).array();
                    Matrix& gx = t.grad_mut(x.id);
                    for (Eigen::Index r = 0; r < dxhat.rows(); ++r) {
                      const double m1 = dxhat.row(r).mean();
                      const double m2 = dxhat.row(r).cwiseProduct(xhat.row(r)).mean();
                      gx.row(r).array() +=
                          inv(r) * (dxhat.row(r).array() - m1 - xhat.row(r).array() * m2);
                    }
                  }
                });
}

Var softmax(Var x, Axis axis) {
  Tape& t = *x.tape;
  Matrix out = x.value();
  if (axis == Axis::Cols) {
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      out.row(r).array() = (out.row(r).array() - out.row(r).maxCoeff()).exp();
      out.row(r) /= out.row(r).sum();
    }
  } else {
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      out.col(c).array() = (out.col(c).array() - out.col(c).maxCoeff()).exp();
      out.col(c) /= out.col(c).sum();
    }
  }
  return t.push(std::move(out), t.requires_grad(x.id), [x, axis](Tape& t, int self) {
    const Matrix& y = t.value(self);
    const Matrix& g = t.grad(self);
    Matrix& gx = t.grad_mut(x.id);
    if (axis == Axis::Cols) {
      for (Eigen::Index r = 0; r < y.rows(); ++r) {
        const double dot = g.row(r).dot(y.row(r));
        gx.row(r).array() += y.row(r).array() * (g.row(r).array() - dot);
      }
    } else {
      for (Eigen::Index c = 0; c < y.cols(); ++c) {
        const double dot = g.col(c).dot(y.col(c));
        gx.col(c).array() += y.col(c).array() * (g.col(c).array() - dot);
      }
    }
  });
}

Var cross_entropy(Var probs, int label) {
  const Matrix& p = probs.value();
  if (p.rows() != 1 && p.cols() != 1) throw Error("shape", "cross_entropy: expected a vector");
  if (label < 0 || label >= p.size()) throw Error("range", "cross_entropy: label out of range");
  Tape& t = *probs.tape;
  const Eigen::Index r = p.rows() == 1 ? 0 : label;
  const Eigen::Index c = p.rows() == 1 ? label : 0;
  Matrix out(1, 1);
  out(0, 0) = -std::log(p(r, c));
  return t.push(std::move(out), t.requires_grad(probs.id), [probs, r, c](Tape& t, int self) {
    t.grad_mut(probs.id)(r, c) -= t.grad(self)(0, 0) / t.value(probs.id)(r, c);
  });
}

Var dropout(Var x, double rate, std::mt19937_64& rng) {
  if (rate <= 0.0) return x;
  if (rate >= 1.0) throw Error("usage", "dropout rate must be < 1");
  Tape& t = *x.tape;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix mask(x.rows(), x.cols());
  const double keep = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = u(rng) < rate ? 0.0 : keep;
  Matrix out = x.value().cwiseProduct(mask);
  return t.push(std::move(out), t.requires_grad(x.id), [x, mask = std::move(mask)](Tape& t, int self) {
    t.grad_mut(x.id) += t.grad(self).cwiseProduct(mask);
  });
}

Var gru_cell(Var x, Var h, const GruVars& w) {
  const auto H = h.cols();
  Var gx = linear(x, w.w_ih, w.b_ih);
  Var gh = linear(h, w.w_hh, w.b_hh);
  Var r = sigmoid(add(slice_cols(gx, 0, H), slice_cols(gh, 0, H)));
  Var z = sigmoid(add(slice_cols(gx, H, H), slice_cols(gh, H, H)));
  Var n = tanh(add(slice_cols(gx, 2 * H, H), mul(r, slice_cols(gh, 2 * H, H))));
  return add(n, mul(z, sub(h, n)));
}

Var gru_sequence(Var x, const GruVars& w, bool reverse) {
  Tape& t = *x.tape;
  const Matrix& X = x.value();
  const Matrix& Wih = w.w_ih.value();
  const Matrix& Whh = w.w_hh.value();
  const auto L = X.rows();
  const auto H = Whh.rows();
  if (Wih.rows() != X.cols() || Wih.cols() != 3 * H || Whh.cols() != 3 * H ||
      w.b_ih.value().cols() != 3 * H || w.b_hh.value().cols() != 3 * H)
    throw Error("shape", "gru_sequence: weight shapes do not match input/hidden size");

  Matrix gx = X * Wih;
  gx.rowwise() += w.b_ih.value().row(0);
  const RowVec<double> bhh = w.b_hh.value().row(0);

  Matrix out(L, H), R(L, H), Z(L, H), Ncand(L, H), HN(L, H), Hprev(L, H);
  RowVec<double> h = RowVec<double>::Zero(H);
  RowVec<double> gh(3 * H);
  for (Eigen::Index s = 0; s < L; ++s) {
    const Eigen::Index tt = reverse ? L - 1 - s : s;
    Hprev.row(tt) = h;
    gh.noalias() = h * Whh;
    gh += bhh;
    auto r = (1.0 / (1.0 + (-(gx.row(tt).segment(0, H) + gh.segment(0, H)).array()).exp())).matrix();
    auto z = (1.0 / (1.0 + (-(gx.row(tt).segment(H, H) + gh.segment(H, H)).array()).exp())).matrix();
    R.row(tt) = r;
    Z.row(tt) = z;
    HN.row(tt) = gh.segment(2 * H, H);
    Ncand.row(tt) =
        (gx.row(tt).segment(2 * H, H).array() + R.row(tt).array() * HN.row(tt).array()).tanh().matrix();
    h = (Ncand.row(tt).array() + Z.row(tt).array() * (h.array() - Ncand.row(tt).array())).matrix();
    out.row(tt) = h;
  }

  GruVars wc = w;
  return t.push(
      std::move(out), t.any_requires_grad({x, w.w_ih, w.w_hh, w.b_ih, w.b_hh}),
      [x, wc, reverse, R = std::move(R), Z = std::move(Z), Ncand = std::move(Ncand),
       HN = std::move(HN), Hprev = std::move(Hprev)](Tape& t, int self) {
        const Matrix& G = t.grad(self);
        const Matrix& Whh = t.value(wc.w_hh.id);
        const auto L = G.rows();
        const auto H = G.cols();
        Matrix dGx(L, 3 * H), dGh(L, 3 * H);
        RowVec<double> dh_next = RowVec<double>::Zero(H);
        for (Eigen::Index s = L - 1; s >= 0; --s) {
          const Eigen::Index tt = reverse ? L - 1 - s : s;
          const auto r = R.row(tt).array();
          const auto z = Z.row(tt).array();
          const auto n = Ncand.row(tt).array();
          const RowVec<double> dh = G.row(tt) + dh_next;
          const auto dn_pre = (dh.array() * (1.0 - z) * (1.0 - n.square())).eval();
          const auto dz_pre = (dh.array() * (Hprev.row(tt).array() - n) * z * (1.0 - z)).eval();
          const auto dr_pre = (dn_pre * HN.row(tt).array() * r * (1.0 - r)).eval();
          dGx.row(tt).segment(0, H) = dr_pre.matrix();
          dGx.row(tt).segment(H, H) = dz_pre.matrix();
          dGx.row(tt).segment(2 * H, H) = dn_pre.matrix();
          dGh.row(tt).segment(0, H) = dr_pre.matrix();
          dGh.row(tt).segment(H, H) = dz_pre.matrix();
          dGh.row(tt).segment(2 * H, H) = (dn_pre * r).matrix();
          dh_next.noalias() = dGh.row(tt) * Whh.transpose();
          dh_next.array() += dh.array() * z;
        }
        if (t.requires_grad(x.id)) t.grad_mut(x.id).noalias() += dGx * t.value(wc.w_ih.id).transpose();
        if (t.requires_grad(wc.w_ih.id)) t.grad_mut(wc.w_ih.id).noalias() += t.value(x.id).transpose() * dGx;
        if (t.requires_grad(wc.b_ih.id)) t.grad_mut(wc.b_ih.id) += dGx.colwise().sum();
        if (t.requires_grad(wc.w_hh.id)) t.grad_mut(wc.w_hh.id).noalias() += Hprev.transpose() * dGh;
        if (t.requires_grad(wc.b_hh.id)) t.grad_mut(wc.b_hh.id) += dGh.colwise().sum();
      });
}

} // namespace ad
} // namespace logigraph
