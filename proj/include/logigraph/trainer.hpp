// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_TRAINER_HPP
#define LOGIGRAPH_TRAINER_HPP

#include "logigraph/adam.hpp"
#include "logigraph/config.hpp"
#include "logigraph/metrics.hpp"
#include "logigraph/model.hpp"

#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

namespace logigraph {

struct EpochLog {
  int epoch = 0;
  long step = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<Metrics> dev;
};

std::string epoch_log_to_json(const EpochLog& e);

/// Builds graphs and encoder inputs once; reused across epochs.
std::vector<PreparedSample> prepare_all(const Model& model, const std::vector<Sample>& samples,
                                        const DelimiterLibrary& lib, const StopwordSet* stopwords = nullptr);

/// Candidate scores for every sample, dropout off.
std::vector<Prediction> predict(const Model& model, const std::vector<PreparedSample>& samples, int threads = 1);
Metrics evaluate(const Model& model, const std::vector<PreparedSample>& samples, int threads = 1);

/// Candidate probabilities for one sample.
std::vector<double> probabilities(const Model& model, const PreparedSample& s);

class Trainer {
public:
  Trainer(Model& model, TrainConfig cfg);

  /// Runs cfg.epochs epochs. Each finished epoch is appended to `log` as one
  /// JSON line when given.
  std::vector<EpochLog> train(const std::vector<PreparedSample>& train_set,
                              const std::vector<PreparedSample>* dev_set = nullptr, std::ostream* log = nullptr);

  /// One optimizer update on the given samples; returns the mean loss.
  double step(const std::vector<const PreparedSample*>& batch, long batch_seed);

  long steps() const { return step_; }
  const TrainConfig& config() const { return cfg_; }
  std::vector<AdamState>& optimizer_state() { return state_; }
  const std::vector<AdamState>& optimizer_state() const { return state_; }
  void restore(long steps, std::vector<AdamState> state);

private:
  Model& model_;
  TrainConfig cfg_;
  std::vector<Parameter*> params_;
  std::unordered_map<const Parameter*, std::size_t> index_;
  std::vector<AdamState> state_;
  std::vector<Matrix> grads_;
  long step_ = 0;
  std::size_t last_correct_ = 0;
};

} // namespace logigraph

#endif // LOGIGRAPH_TRAINER_HPP
