// SPDX-License-Identifier: Apache-2.0
#include "logigraph/fusion.hpp"

#include <cmath>

namespace logigraph {

Pooling parse_pooling(std::string_view s) {
  if (s == "elementwise") return Pooling::Elementwise;
  if (s == "scalar") return Pooling::Scalar;
  throw Error("usage", "unknown pooling '" + std::string(s) + "' (expected elementwise or scalar)");
}

const char* to_string(Pooling p) { return p == Pooling::Elementwise ? "elementwise" : "scalar"; }

FusionParams::FusionParams(int dim, Pooling pooling_, Rng& rng)
    : ln_merge("fusion.ln_merge", ParamGroup::Fusion, dim),
      gru("fusion.gru", ParamGroup::Fusion, dim, dim / 2, rng),
      ln_residual("fusion.ln_residual", ParamGroup::Fusion, dim),
      integrate("fusion.integrate", ParamGroup::Fusion, 3 * dim, dim, rng),
      ln_out("fusion.ln_out", ParamGroup::Fusion, dim), head("fusion.head", ParamGroup::Fusion, dim, 1, rng),
      pooling(pooling_) {
  if (pooling == Pooling::Scalar)
    attention = {"fusion.attention", ParamGroup::Fusion,
                 uniform_init(dim, 1, 1.0 / std::sqrt(static_cast<double>(dim)), rng)};
}

void FusionParams::collect(std::vector<Parameter*>& out) {
  ln_merge.collect(out);
  gru.collect(out);
  ln_residual.collect(out);
  integrate.collect(out);
  ln_out.collect(out);
  head.collect(out);
  if (pooling == Pooling::Scalar) out.push_back(&attention);
}

ad::Var fuse(ad::Tape& tape, ad::Var tokens, ad::Var logic, const FusionParams& p, double dropout, Rng* rng) {
  ad::Var merged = p.ln_merge(tape, ad::add(logic, tokens));
  ad::Var e = p.ln_residual(tape, ad::add(merged, p.gru(tape, merged)));
  if (rng && dropout > 0.0) e = ad::dropout(e, dropout, *rng);
  return e;
}

ad::Var pool_segment(ad::Tape& tape, ad::Var segment, const FusionParams& p) {
  if (segment.rows() == 1) return segment;
  if (p.pooling == Pooling::Elementwise)
    return ad::col_sum(ad::mul(ad::softmax(segment, ad::Axis::Rows), segment));
  ad::Var weights = ad::softmax(ad::matmul(segment, tape.param(p.attention)), ad::Axis::Rows);
  return ad::col_sum(ad::mul_rows(segment, weights));
}

ad::Var pool(ad::Tape& tape, ad::Var e, int boundary, const FusionParams& p) {
  const auto L = e.rows();
  if (boundary <= 1 || boundary >= L)
    throw Error("range", "segment boundary " + std::to_string(boundary) + " outside (1, " + std::to_string(L) + ")");
  const ad::Var parts[] = {
      ad::slice_rows(e, 0, 1),
      pool_segment(tape, ad::slice_rows(e, 1, boundary - 1), p),
      pool_segment(tape, ad::slice_rows(e, boundary, L - boundary), p),
  };
  return p.ln_out(tape, ad::gelu(p.integrate(tape, ad::concat_cols(parts))));
}

ad::Var score(ad::Tape& tape, ad::Var pooled, const FusionParams& p) { return p.head(tape, pooled); }

Ranking rank(std::span<const ad::Var> scores, std::optional<int> label) {
  Ranking r;
  r.probs = ad::softmax(ad::concat_rows(scores), ad::Axis::Rows);
  if (label) r.loss = ad::cross_entropy(r.probs, *label);
  return r;
}

} // namespace logigraph
