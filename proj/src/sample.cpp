// SPDX-License-Identifier: Apache-2.0
#include "logigraph/sample.hpp"

#include "logigraph/delimiters.hpp"

#include <json.hpp>

#include <fstream>

namespace logigraph {

using nlohmann::json;

Sample parse_sample(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error("schema", std::string("invalid JSON: ") + e.what());
  }
  auto need = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw Error("schema", std::string("missing field '") + key + "'");
    return j.at(key);
  };
  Sample s;
  try {
    s.id = need("id").get<std::string>();
    const auto mode = j.value("mode", std::string("qa"));
    if (mode == "qa") s.mode = SampleMode::Qa;
    else if (mode == "dialogue") s.mode = SampleMode::Dialogue;
    else throw Error("schema", "field 'mode' must be qa or dialogue");
    s.context = need("context").get<std::string>();
    if (j.contains("question") && !j.at("question").is_null())
      s.question = j.at("question").get<std::string>();
    s.options = need("options").get<std::vector<std::string>>();
    s.label = need("label").get<int>();
  } catch (const json::type_error& e) {
    throw Error("schema", std::string("wrong field type: ") + e.what());
  }
  if (s.mode == SampleMode::Qa && !s.question)
    throw Error("schema", "sample '" + s.id + "': qa mode requires 'question'");
  if (s.mode == SampleMode::Dialogue && s.question)
    throw Error("schema", "sample '" + s.id + "': dialogue mode takes no 'question'");
  if (s.options.size() < 2)
    throw Error("schema", "sample '" + s.id + "': need at least 2 options");
  if (s.label < 0 || s.label >= s.num_candidates())
    throw Error("schema", "sample '" + s.id + "': label out of range");
  return s;
}

std::string sample_to_json(const Sample& s) {
  // Key order is fixed so generated files are byte-stable.
  json j = json::object();
  j["id"] = s.id;
  j["mode"] = s.mode == SampleMode::Qa ? "qa" : "dialogue";
  j["context"] = s.context;
  if (s.question) j["question"] = *s.question;
  j["options"] = s.options;
  j["label"] = s.label;
  return j.dump();
}

std::vector<Sample> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open '" + path + "'");
  std::vector<Sample> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_sample(line));
    } catch (const Error& e) {
      throw Error(e.code(), path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_samples(const std::string& path, const std::vector<Sample>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write '" + path + "'");
  for (const auto& s : samples) out << sample_to_json(s) << '\n';
}

SequenceLayout assemble_sequence(const Sample& s, int c, int max_len) {
  if (c < 0 || c >= s.num_candidates())
    throw Error("range", "candidate index " + std::to_string(c) + " out of range for sample '" +
                             s.id + "'");
  auto passage = tokenize(s.context);
  std::vector<std::string> cand;
  const bool qa = s.mode == SampleMode::Qa;
  if (qa) {
    cand = tokenize(s.question.value_or(""));
    cand.emplace_back(kConcat);
  }
  for (auto& t : tokenize(s.options[static_cast<std::size_t>(c)])) cand.push_back(std::move(t));

  const std::size_t fixed = qa ? 3 : 2; // <s>, </s> [, final </s>]
  const auto limit = static_cast<std::size_t>(std::max(max_len, 1));
  auto total = [&] { return passage.size() + cand.size() + fixed; };
  while (total() > limit && passage.size() > 1) passage.pop_back();
  while (total() > limit && cand.size() > 1) cand.pop_back();

  SequenceLayout out;
  out.tokens.emplace_back(kBos);
  out.tokens.insert(out.tokens.end(), passage.begin(), passage.end());
  out.tokens.emplace_back(kEos);
  out.boundary = out.tokens.size();
  out.tokens.insert(out.tokens.end(), cand.begin(), cand.end());
  if (qa) out.tokens.emplace_back(kEos);
  if (out.tokens.size() > limit) {
    out.tokens.resize(limit);
    if (qa) out.tokens.back() = std::string(kEos);
    out.boundary = std::min(out.boundary, out.tokens.size());
  }
  return out;
}

} // namespace logigraph
