// SPDX-License-Identifier: Apache-2.0
#include "logigraph/metrics.hpp"

#include "logigraph/fwd.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>

namespace logigraph {

std::vector<int> ranking(std::span<const double> scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)]; });
  return order;
}

int gold_rank(const Prediction& p) {
  if (p.label < 0 || p.label >= static_cast<int>(p.scores.size()))
    throw Error("range", "gold label " + std::to_string(p.label) + " out of range");
  const auto order = ranking(p.scores);
  return static_cast<int>(std::find(order.begin(), order.end(), p.label) - order.begin()) + 1;
}

Metrics compute_metrics(std::span<const Prediction> predictions) {
  if (predictions.empty()) throw Error("empty", "cannot compute metrics on an empty evaluation set");
  Metrics m;
  for (const auto& p : predictions) {
    const int r = gold_rank(p);
    m.r_at_1 += r <= 1;
    m.r_at_2 += r <= 2;
    m.mrr += 1.0 / r;
  }
  const auto n = static_cast<double>(predictions.size());
  m.r_at_1 /= n;
  m.r_at_2 /= n;
  m.mrr /= n;
  m.accuracy = m.r_at_1;
  m.count = predictions.size();
  return m;
}

std::string metrics_to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["accuracy"] = m.accuracy;
  j["R@1"] = m.r_at_1;
  j["R@2"] = m.r_at_2;
  j["MRR"] = m.mrr;
  j["count"] = m.count;
  return j.dump();
}

} // namespace logigraph
