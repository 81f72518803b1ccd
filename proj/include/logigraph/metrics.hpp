// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_METRICS_HPP
#define LOGIGRAPH_METRICS_HPP

#include <span>
#include <string>
#include <vector>

namespace logigraph {

struct Prediction {
  std::vector<double> scores; // one per candidate, higher is better
  int label = 0;
};

struct Metrics {
  double accuracy = 0.0;
  double r_at_1 = 0.0;
  double r_at_2 = 0.0;
  double mrr = 0.0;
  std::size_t count = 0;
};

/// 1-based rank of the gold candidate. Equal scores rank the lower index first.
int gold_rank(const Prediction& p);
/// Candidate indices from best to worst under the same tie rule.
std::vector<int> ranking(std::span<const double> scores);

Metrics compute_metrics(std::span<const Prediction> predictions);
std::string metrics_to_json(const Metrics& m);

} // namespace logigraph

#endif // LOGIGRAPH_METRICS_HPP
