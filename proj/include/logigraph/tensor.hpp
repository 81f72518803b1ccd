// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_TENSOR_HPP
#define LOGIGRAPH_TENSOR_HPP

#include "logigraph/fwd.hpp"

#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace logigraph {

enum class ParamGroup { Encoder, Reasoner, Fusion };
const char* to_string(ParamGroup g);

/// A learnable weight. Values are owned here; gradients live on tapes and in
/// trainer-side buffers so concurrent tapes never write to a Parameter.
struct Parameter {
  std::string name;
  ParamGroup group = ParamGroup::Fusion;
  Matrix value;
};

namespace ad {

class Tape;

/// Handle to a node on a Tape. Cheap to copy; valid while the tape lives.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  const Matrix& value() const;
  const Matrix& grad() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  double item() const { return value()(0, 0); }
  bool valid() const { return tape != nullptr; }
};

/// Reverse-mode tape. Single-threaded; use one tape per sample.
class Tape {
public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  /// Leaf whose gradient is accumulated across backward() calls until zero_grad().
  Var variable(Matrix value);
  /// Leaf viewing a parameter's storage (no copy).
  Var param(const Parameter& p);

  /// Propagates d(loss)/d(node) to every participant; loss must be 1x1.
  void backward(Var loss);
  void zero_grad();

  const Matrix& value(int id) const;
  const Matrix& grad(int id) const;
  bool requires_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  /// Visits accumulated parameter gradients: dense ones from param() leaves and
  /// row-sparse ones from embedding lookups.
  void for_each_param_grad(
      const std::function<void(const Parameter&, const Matrix&)>& dense,
      const std::function<void(const Parameter&, int row, const Matrix& grad_row)>& sparse) const;

  // Building blocks for ops.
  using Backprop = std::function<void(Tape&, int self)>;
  Var push(Matrix value, bool requires_grad, Backprop backprop);
  bool any_requires_grad(std::initializer_list<Var> vs) const;
  /// Grad buffer of `id`, zero-initialized on first touch.
  Matrix& grad_mut(int id);
  void add_sparse_row_grad(const Parameter* p, int row, const Eigen::Ref<const Matrix>& g);

private:
  struct Node {
    Matrix own;
    const Matrix* view = nullptr;
    Matrix grad;
    bool requires_grad = false;
    bool leaf = false;
    const Parameter* param = nullptr;
    Backprop backprop;
    const Matrix& value() const { return view ? *view : own; }
  };
  std::vector<Node> nodes_;
  struct SparseRow {
    const Parameter* param;
    int row;
    Matrix grad;
  };
  std::vector<SparseRow> sparse_;
  static const Matrix kEmpty;
};

enum class Axis { Rows, Cols };

// Linear algebra and structure.
Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double s);
/// a + 1 * row, where row is 1 x cols(a).
Var add_row(Var a, Var row);
/// x W + 1 b.
Var linear(Var x, Var w, Var b);
/// Scales row i of x by s(i, 0); s is rows(x) x 1.
Var mul_rows(Var x, Var s);
Var concat_cols(std::span<const Var> parts);
Var concat_rows(std::span<const Var> parts);
Var slice_rows(Var a, Eigen::Index start, Eigen::Index count);
Var slice_cols(Var a, Eigen::Index start, Eigen::Index count);
Var sum(Var a);
/// Column sums as a 1 x cols row.
Var col_sum(Var a);
/// out.row(l) = x.row(index[l]).
Var gather_rows(Var x, std::span<const int> index);
/// out.row(n) = sum of x.row(l) with index[l] == n; out has `count` rows.
Var segment_sum(Var x, std::span<const int> index, Eigen::Index count);
/// Rows of an embedding table; gradients are recorded row-sparse.
Var embedding(Tape& tape, const Parameter& table, std::span<const int> ids);

// Nonlinearities.
Var sigmoid(Var x);
Var tanh(Var x);
Var relu(Var x);
/// Exact GeLU, x * Phi(x).
Var gelu(Var x);
Var log(Var x);

/// Per-row normalization to zero mean and unit variance, then gain/bias (1 x cols).
Var layer_norm(Var x, Var gain, Var bias, double eps = 1e-5);
/// Max-shifted softmax. Axis::Cols normalizes each row across its columns,
/// Axis::Rows normalizes each column across rows.
Var softmax(Var x, Axis axis = Axis::Cols);
/// -log(probs[label]) for a 1 x C or C x 1 probability vector.
Var cross_entropy(Var probs, int label);
/// Inverted dropout with a fixed mask drawn from `rng`.
Var dropout(Var x, double rate, std::mt19937_64& rng);

/// GRU weights in [reset | update | candidate] column blocks.
struct GruVars {
  Var w_ih; // in x 3h
  Var w_hh; // h x 3h
  Var b_ih; // 1 x 3h
  Var b_hh; // 1 x 3h
};

/// One GRU step built from primitive ops:
///   r = sig(x Wr + br + h Ur + cr), z = sig(x Wz + bz + h Uz + cz),
///   n = tanh(x Wn + bn + r * (h Un + cn)), h' = (1 - z) * n + z * h.
Var gru_cell(Var x, Var h, const GruVars& w);
/// The same recurrence over all rows of x in one node with hand-written BPTT.
/// Row t of the result is the state after reading input row t; when reversed the
/// scan runs from the last row to the first.
Var gru_sequence(Var x, const GruVars& w, bool reverse = false);

} // namespace ad
} // namespace logigraph

#endif // LOGIGRAPH_TENSOR_HPP
