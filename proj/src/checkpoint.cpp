// SPDX-License-Identifier: Apache-2.0
#include "logigraph/checkpoint.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>

namespace logigraph {

using nlohmann::ordered_json;

namespace {

constexpr char kMagic[4] = {'L', 'G', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void write_matrix(std::ofstream& out, const Matrix& m) {
  out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
}

void read_matrix(std::ifstream& in, Matrix& m, const std::string& path) {
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
  if (!in) throw Error("checkpoint", path + ": truncated data");
}

} // namespace

void save_checkpoint(const std::string& path, const Model& model, const TrainConfig& cfg, const Trainer* trainer) {
  const auto params = model.parameters();
  ordered_json h;
  h["format"] = "logigraph.checkpoint";
  h["config"] = ordered_json::parse(config_to_json(cfg));
  h["vocab"] = ordered_json::parse(model.vocab().to_json())["tokens"];
  h["params"] = ordered_json::array();
  for (const auto* p : params)
    h["params"].push_back({{"name", p->name}, {"group", to_string(p->group)}, {"rows", p->value.rows()},
                           {"cols", p->value.cols()}});
  const bool with_opt = trainer != nullptr;
  h["optimizer"] = {{"steps", with_opt ? trainer->steps() : 0}, {"moments", with_opt}};
  const std::string header = h.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path);
  const std::uint64_t len = header.size();
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(header.data(), static_cast<std::streamsize>(len));
  for (const auto* p : params) write_matrix(out, p->value);
  if (with_opt) {
    const auto& st = trainer->optimizer_state();
    for (std::size_t k = 0; k < params.size(); ++k) {
      const Matrix zero = Matrix::Zero(params[k]->value.rows(), params[k]->value.cols());
      write_matrix(out, st[k].m.size() ? st[k].m : zero);
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
      const Matrix zero = Matrix::Zero(params[k]->value.rows(), params[k]->value.cols());
      write_matrix(out, st[k].v.size() ? st[k].v : zero);
    }
  }
  if (!out) throw Error("io", "failed writing " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot read " + path);
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t len = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error("checkpoint", path + ": not a checkpoint file");
  if (version != kVersion) throw Error("checkpoint", path + ": unsupported version " + std::to_string(version));
  std::string header(len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(len));
  if (!in) throw Error("checkpoint", path + ": truncated header");

  Checkpoint ck;
  ordered_json h;
  try {
    h = ordered_json::parse(header);
    ck.config = config_from_json(h.at("config").dump());
    ordered_json v;
    v["format"] = "logigraph.vocab";
    v["tokens"] = h.at("vocab");
    ck.model = std::make_unique<Model>(ck.config.model, Vocab::from_json(v.dump()), ck.config.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error("checkpoint", path + ": bad header: " + e.what());
  }
  auto params = ck.model->parameters();
  const auto& table = h.at("params");
  if (table.size() != params.size()) throw Error("checkpoint", path + ": parameter count mismatch");
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& e = table[k];
    if (e.at("name").get<std::string>() != params[k]->name || e.at("rows").get<Eigen::Index>() != params[k]->value.rows() ||
        e.at("cols").get<Eigen::Index>() != params[k]->value.cols())
      throw Error("checkpoint", path + ": parameter " + e.at("name").get<std::string>() + " does not match the model");
    read_matrix(in, params[k]->value, path);
  }
  ck.steps = h.at("optimizer").at("steps").get<long>();
  if (h.at("optimizer").at("moments").get<bool>()) {
    ck.optimizer.resize(params.size());
    for (std::size_t k = 0; k < params.size(); ++k) {
      ck.optimizer[k].m.resize(params[k]->value.rows(), params[k]->value.cols());
      read_matrix(in, ck.optimizer[k].m, path);
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
      ck.optimizer[k].v.resize(params[k]->value.rows(), params[k]->value.cols());
      read_matrix(in, ck.optimizer[k].v, path);
    }
  }
  return ck;
}

} // namespace logigraph
