// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_CHECKPOINT_HPP
#define LOGIGRAPH_CHECKPOINT_HPP

#include "logigraph/trainer.hpp"

#include <memory>
#include <string>

namespace logigraph {

/// Layout: "LGCK", u32 version, u64 header length, JSON header (config, vocab,
/// parameter table, optimizer step), then float64 parameter values in table
/// order, then Adam first and second moments in the same order when present.
void save_checkpoint(const std::string& path, const Model& model, const TrainConfig& cfg,
                     const Trainer* trainer = nullptr);

struct Checkpoint {
  TrainConfig config;
  std::unique_ptr<Model> model;
  long steps = 0;
  std::vector<AdamState> optimizer; // empty when saved without optimizer state
};

Checkpoint load_checkpoint(const std::string& path);

} // namespace logigraph

#endif // LOGIGRAPH_CHECKPOINT_HPP
