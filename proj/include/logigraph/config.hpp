// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_CONFIG_HPP
#define LOGIGRAPH_CONFIG_HPP

#include "logigraph/model.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace logigraph {

struct TrainConfig {
  double lr_reasoner = 1e-5;
  double lr_fusion = 5e-6;
  double lr_encoder = 5e-6;
  long warmup_steps = 4000;
  double weight_decay = 0.01;
  int epochs = 30;
  int batch_size = 16;
  std::uint64_t seed = 0;
  int threads = 1;
  ModelConfig model;

  double lr_for(ParamGroup g) const;
};

/// Sets one key. Keys match the names written by config_to_text.
void apply_setting(TrainConfig& cfg, const std::string& key, const std::string& value);

/// Flat "key = value" lines; '#' starts a comment. Errors name the line.
void apply_config_text(TrainConfig& cfg, const std::string& text, const std::string& origin = "config");
void apply_config_file(TrainConfig& cfg, const std::string& path);

/// Applies LOGIGRAPH_<KEY> variables from the process environment.
void apply_env(TrainConfig& cfg);
/// Same, from an explicit map (for tests).
void apply_env(TrainConfig& cfg, const std::map<std::string, std::string>& env);

std::vector<std::string> config_keys();
std::string config_to_text(const TrainConfig& cfg);
std::string config_to_json(const TrainConfig& cfg);
TrainConfig config_from_json(const std::string& json);

std::string edge_mode_to_string(const Ablation& a);

} // namespace logigraph

#endif // LOGIGRAPH_CONFIG_HPP
