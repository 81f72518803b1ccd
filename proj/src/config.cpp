// SPDX-License-Identifier: Apache-2.0
#include "logigraph/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

extern char** environ;

namespace logigraph {

double TrainConfig::lr_for(ParamGroup g) const {
  switch (g) {
  case ParamGroup::Encoder: return lr_encoder;
  case ParamGroup::Reasoner: return lr_reasoner;
  case ParamGroup::Fusion: return lr_fusion;
  }
  return 0.0;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw Error("config", "bad value '" + v + "' for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error("config", "bad boolean '" + v + "' for " + key);
}

template <typename T>
T positive(const std::string& key, T v) {
  if (v <= T(0)) throw Error("config", key + " must be positive");
  return v;
}

template <typename T>
T non_negative(const std::string& key, T v) {
  if (v < T(0)) throw Error("config", key + " must not be negative");
  return v;
}

/// Shortest text that parses back to the same double.
std::string shortest(double x) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

} // namespace

std::string edge_mode_to_string(const Ablation& a) {
  switch (a.mode) {
  case EdgeMode::Paper: return "paper";
  case EdgeMode::FullyConnected: return "full";
  case EdgeMode::SingleEdgeType: return "single";
  case EdgeMode::RandomEdges: {
    if (!a.p) return "random";
    return "random:" + shortest(*a.p);
  }
  }
  return "paper";
}

std::vector<std::string> config_keys() {
  return {"lr_reasoner", "lr_fusion", "lr_encoder", "warmup_steps", "weight_decay", "dropout",
          "epochs",      "batch_size", "seed",      "threads",      "layers",       "max_len",
          "hidden",      "nodes",      "edges",     "node_init",    "graph",        "per_type_messages",
          "pooling",     "embeddings"};
}

void apply_setting(TrainConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  auto& m = c.model;
  if (key == "lr_reasoner") c.lr_reasoner = non_negative(key, parse_number<double>(key, v));
  else if (key == "lr_fusion") c.lr_fusion = non_negative(key, parse_number<double>(key, v));
  else if (key == "lr_encoder") c.lr_encoder = non_negative(key, parse_number<double>(key, v));
  else if (key == "warmup_steps") c.warmup_steps = non_negative(key, parse_number<long>(key, v));
  else if (key == "weight_decay") c.weight_decay = non_negative(key, parse_number<double>(key, v));
  else if (key == "dropout") {
    m.dropout = non_negative(key, parse_number<double>(key, v));
    if (m.dropout >= 1.0) throw Error("config", "dropout must be < 1");
  } else if (key == "epochs") c.epochs = positive(key, parse_number<int>(key, v));
  else if (key == "batch_size") c.batch_size = positive(key, parse_number<int>(key, v));
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, v);
  else if (key == "threads") c.threads = positive(key, parse_number<int>(key, v));
  else if (key == "layers") m.layers = positive(key, parse_number<int>(key, v));
  else if (key == "max_len") {
    m.max_len = positive(key, parse_number<int>(key, v));
    if (m.max_len < 4) throw Error("config", "max_len must be at least 4");
  } else if (key == "hidden") {
    m.hidden = positive(key, parse_number<int>(key, v));
    if (m.hidden % 2 != 0) throw Error("config", "hidden must be even");
  } else if (key == "nodes") m.granularity = parse_granularity(v);
  else if (key == "edges") {
    const auto seed = m.edges.seed;
    m.edges = parse_edge_mode(v);
    m.edges.seed = seed;
  } else if (key == "node_init") m.node_init = parse_node_init(v);
  else if (key == "graph") m.use_graph = parse_bool(key, v);
  else if (key == "per_type_messages") m.per_type = parse_bool(key, v);
  else if (key == "pooling") m.pooling = parse_pooling(v);
  else if (key == "embeddings") m.embeddings = v;
  else throw Error("config", "unknown key '" + key + "'");
}

void apply_config_text(TrainConfig& cfg, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error("config", origin + ":" + std::to_string(n) + ": expected key = value");
    try {
      apply_setting(cfg, trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const Error& e) {
      throw Error("config", origin + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

void apply_config_file(TrainConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path);
}

void apply_env(TrainConfig& cfg, const std::map<std::string, std::string>& env) {
  for (const auto& key : config_keys()) {
    std::string name = "LOGIGRAPH_" + key;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::toupper(ch); });
    auto it = env.find(name);
    if (it == env.end()) continue;
    try {
      apply_setting(cfg, key, it->second);
    } catch (const Error& e) {
      throw Error("config", name + ": " + e.what());
    }
  }
}

void apply_env(TrainConfig& cfg) {
  std::map<std::string, std::string> env;
  for (char** e = environ; e && *e; ++e) {
    std::string_view kv(*e);
    if (!kv.starts_with("LOGIGRAPH_")) continue;
    const auto eq = kv.find('=');
    if (eq != std::string_view::npos) env.emplace(kv.substr(0, eq), kv.substr(eq + 1));
  }
  apply_env(cfg, env);
}

namespace {

nlohmann::ordered_json to_ordered(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["lr_reasoner"] = c.lr_reasoner;
  j["lr_fusion"] = c.lr_fusion;
  j["lr_encoder"] = c.lr_encoder;
  j["warmup_steps"] = c.warmup_steps;
  j["weight_decay"] = c.weight_decay;
  j["dropout"] = c.model.dropout;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["layers"] = c.model.layers;
  j["max_len"] = c.model.max_len;
  j["hidden"] = c.model.hidden;
  j["nodes"] = to_string(c.model.granularity);
  j["edges"] = edge_mode_to_string(c.model.edges);
  j["edge_seed"] = c.model.edges.seed;
  j["node_init"] = to_string(c.model.node_init);
  j["graph"] = c.model.use_graph;
  j["per_type_messages"] = c.model.per_type;
  j["pooling"] = to_string(c.model.pooling);
  j["embeddings"] = c.model.embeddings;
  return j;
}

std::string value_text(const nlohmann::ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return shortest(v.get<double>());
  return v.dump();
}

} // namespace

std::string config_to_text(const TrainConfig& cfg) {
  std::string out;
  const auto j = to_ordered(cfg);
  for (const auto& [k, v] : j.items()) {
    if (k == "edge_seed") continue;
    out += k + " = " + value_text(v) + "\n";
  }
  return out;
}

std::string config_to_json(const TrainConfig& cfg) { return to_ordered(cfg).dump(); }

TrainConfig config_from_json(const std::string& text) {
  TrainConfig c;
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error("config", std::string("config JSON: ") + e.what());
  }
  for (const auto& [k, v] : j.items()) {
    if (k == "edge_seed") c.model.edges.seed = v.get<std::uint64_t>();
    else apply_setting(c, k, value_text(v));
  }
  return c;
}

} // namespace logigraph
