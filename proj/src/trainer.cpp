// SPDX-License-Identifier: Apache-2.0
#include "logigraph/trainer.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

namespace logigraph {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers, static partition.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, std::min<int>(threads, static_cast<int>(n))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct SampleGrads {
  std::vector<std::pair<std::size_t, Matrix>> dense;
  std::vector<std::tuple<std::size_t, int, Matrix>> sparse;
  double loss = 0.0;
  bool correct = false;
};

} // namespace

std::string epoch_log_to_json(const EpochLog& e) {
  nlohmann::ordered_json j;
  j["epoch"] = e.epoch;
  j["step"] = e.step;
  j["train_loss"] = e.train_loss;
  j["train_accuracy"] = e.train_accuracy;
  if (e.dev) {
    j["dev_accuracy"] = e.dev->accuracy;
    j["dev_R@1"] = e.dev->r_at_1;
    j["dev_R@2"] = e.dev->r_at_2;
    j["dev_MRR"] = e.dev->mrr;
  }
  return j.dump();
}

std::vector<PreparedSample> prepare_all(const Model& model, const std::vector<Sample>& samples,
                                        const DelimiterLibrary& lib, const StopwordSet* stopwords) {
  std::vector<PreparedSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(model.prepare(s, lib, stopwords));
  return out;
}

std::vector<double> probabilities(const Model& model, const PreparedSample& s) {
  ad::Tape tape;
  const auto out = model.forward(tape, s);
  const Matrix& p = out.ranking.probs.value();
  return {p.data(), p.data() + p.size()};
}

std::vector<Prediction> predict(const Model& model, const std::vector<PreparedSample>& samples, int threads) {
  std::vector<Prediction> out(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    ad::Tape tape;
    const auto fwd = model.forward(tape, samples[i]);
    Prediction p;
    for (const auto& s : fwd.scores) p.scores.push_back(s.item());
    p.label = samples[i].label;
    out[i] = std::move(p);
  });
  return out;
}

Metrics evaluate(const Model& model, const std::vector<PreparedSample>& samples, int threads) {
  return compute_metrics(predict(model, samples, threads));
}

Trainer::Trainer(Model& model, TrainConfig cfg) : model_(model), cfg_(std::move(cfg)), params_(model.parameters()) {
  for (std::size_t i = 0; i < params_.size(); ++i) index_[params_[i]] = i;
  state_.resize(params_.size());
  grads_.resize(params_.size());
}

void Trainer::restore(long steps, std::vector<AdamState> state) {
  if (state.size() != params_.size()) throw Error("checkpoint", "optimizer state does not match the model");
  step_ = steps;
  state_ = std::move(state);
}

double Trainer::step(const std::vector<const PreparedSample*>& batch, long batch_seed) {
  if (batch.empty()) throw Error("empty", "empty batch");
  std::vector<SampleGrads> per(batch.size());
  parallel_for(batch.size(), cfg_.threads, [&](std::size_t i) {
    const PreparedSample& s = *batch[i];
    if (s.label < 0 || s.label >= static_cast<int>(s.candidates.size()))
      throw Error("range", "label out of range in sample '" + s.id + "'");
    ad::Tape tape;
    Rng rng(splitmix(static_cast<std::uint64_t>(batch_seed) ^ splitmix(i)));
    const auto out = model_.forward(tape, s, &rng);
    const ad::Var loss = *out.ranking.loss;
    tape.backward(loss);
    auto& g = per[i];
    g.loss = loss.item();
    std::vector<double> scores;
    for (const auto& v : out.scores) scores.push_back(v.item());
    g.correct = ranking(scores).front() == s.label;
    tape.for_each_param_grad(
        [&](const Parameter& p, const Matrix& m) { g.dense.emplace_back(index_.at(&p), m); },
        [&](const Parameter& p, int row, const Matrix& m) { g.sparse.emplace_back(index_.at(&p), row, m); });
  });

  for (std::size_t k = 0; k < params_.size(); ++k) {
    if (grads_[k].size() == 0) grads_[k] = Matrix::Zero(params_[k]->value.rows(), params_[k]->value.cols());
    else grads_[k].setZero();
  }
  double loss = 0.0;
  last_correct_ = 0;
  for (const auto& g : per) {
    last_correct_ += g.correct;
    if (!std::isfinite(g.loss)) throw Error("nan", "non-finite training loss");
    loss += g.loss;
    for (const auto& [k, m] : g.dense) grads_[k] += m;
    for (const auto& [k, row, m] : g.sparse) grads_[k].row(row) += m.row(0);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (std::size_t k = 0; k < params_.size(); ++k) {
    const double lr = warmup_lr(cfg_.lr_for(params_[k]->group), step_, cfg_.warmup_steps);
    adam_step(*params_[k], grads_[k] * inv, state_[k], step_ + 1, lr, cfg_.weight_decay);
  }
  ++step_;
  return loss * inv;
}

std::vector<EpochLog> Trainer::train(const std::vector<PreparedSample>& train_set,
                                     const std::vector<PreparedSample>* dev_set, std::ostream* log) {
  if (train_set.empty()) throw Error("empty", "training set is empty");
  std::vector<EpochLog> logs;
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng(splitmix(cfg_.seed));
  const auto bs = static_cast<std::size_t>(cfg_.batch_size);
  for (int epoch = 1; epoch <= cfg_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    EpochLog e;
    e.epoch = epoch;
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t b = 0; b < order.size(); b += bs) {
      std::vector<const PreparedSample*> batch;
      for (std::size_t i = b; i < std::min(order.size(), b + bs); ++i) batch.push_back(&train_set[order[i]]);
      const long seed = static_cast<long>(splitmix(cfg_.seed ^ splitmix(static_cast<std::uint64_t>(step_))));
      loss_sum += step(batch, seed) * static_cast<double>(batch.size());
      correct += last_correct_;
    }
    e.step = step_;
    e.train_loss = loss_sum / static_cast<double>(order.size());
    e.train_accuracy = static_cast<double>(correct) / static_cast<double>(order.size());
    if (dev_set && !dev_set->empty()) e.dev = evaluate(model_, *dev_set, cfg_.threads);
    if (log) *log << epoch_log_to_json(e) << '\n' << std::flush;
    logs.push_back(std::move(e));
  }
  return logs;
}

} // namespace logigraph
