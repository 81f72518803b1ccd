// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_FUSION_HPP
#define LOGIGRAPH_FUSION_HPP

#include "logigraph/layers.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace logigraph {

/// Elementwise: softmax over positions separately for every feature.
/// Scalar: one score per position (e_m . w), shared by all features.
enum class Pooling { Elementwise, Scalar };
Pooling parse_pooling(std::string_view s);
const char* to_string(Pooling p);

struct FusionParams {
  LayerNorm ln_merge;  // t^ = LN(t^lambda + t)
  BiGru gru;
  LayerNorm ln_residual; // e = LN(t^ + t-bar)
  Linear integrate;      // 3b -> b
  LayerNorm ln_out;
  Linear head;           // b -> 1
  Parameter attention;   // b x 1, scalar pooling only
  Pooling pooling = Pooling::Elementwise;

  FusionParams() = default;
  FusionParams(int dim, Pooling pooling, Rng& rng);
  void collect(std::vector<Parameter*>& out);
};

/// Residual merge of token and logic embeddings followed by a BiGRU.
/// `rng` enables dropout on the result.
ad::Var fuse(ad::Tape& tape, ad::Var tokens, ad::Var logic, const FusionParams& p, double dropout = 0.0,
             Rng* rng = nullptr);

/// Pools one segment (rows x b) down to 1 x b.
ad::Var pool_segment(ad::Tape& tape, ad::Var segment, const FusionParams& p);

/// Splits e into [e_1 | rows 1..M-1 | rows M..L-1] (0-based), pools each
/// segment, concatenates and projects: LN(GeLU(W [..] + b)).
ad::Var pool(ad::Tape& tape, ad::Var e, int boundary, const FusionParams& p);

/// Scalar score of one pooled candidate representation.
ad::Var score(ad::Tape& tape, ad::Var pooled, const FusionParams& p);

struct Ranking {
  ad::Var probs;              // C x 1
  std::optional<ad::Var> loss; // cross-entropy against the gold label
};

/// Softmax over stacked candidate scores (each 1x1).
Ranking rank(std::span<const ad::Var> scores, std::optional<int> label);

} // namespace logigraph

#endif // LOGIGRAPH_FUSION_HPP
