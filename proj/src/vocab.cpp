// SPDX-License-Identifier: Apache-2.0
#include "logigraph/delimiters.hpp"
#include "logigraph/encoder.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace logigraph {

using nlohmann::json;

Vocab::Vocab() {
  for (const char* t : {"<pad>", "<unk>", "<s>", "</s>"}) add(t);
  add(std::string(logigraph::kConcat));
}

Vocab Vocab::build(const std::vector<Sample>& samples, int min_freq) {
  std::map<std::string, int> counts;
  std::vector<std::string> order;
  auto count = [&](const std::string& text) {
    for (auto& tok : tokenize(text))
      if (counts[tok]++ == 0) order.push_back(tok);
  };
  for (const auto& s : samples) {
    count(s.context);
    if (s.question) count(*s.question);
    for (const auto& o : s.options) count(o);
  }
  Vocab v;
  for (const auto& tok : order)
    if (counts[tok] >= min_freq) v.add(tok);
  return v;
}

int Vocab::add(const std::string& token) {
  auto [it, inserted] = ids_.emplace(token, size());
  if (inserted) tokens_.push_back(token);
  return it->second;
}

int Vocab::id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnk : it->second;
}

std::string Vocab::to_json() const {
  json j;
  j["format"] = "logigraph.vocab";
  j["version"] = 1;
  j["tokens"] = tokens_;
  return j.dump();
}

Vocab Vocab::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error("vocab", std::string("vocab is not valid JSON: ") + e.what());
  }
  if (j.value("format", "") != "logigraph.vocab" || !j.contains("tokens") || !j["tokens"].is_array())
    throw Error("vocab", "not a logigraph vocab document");
  const auto tokens = j["tokens"].get<std::vector<std::string>>();
  Vocab v;
  if (tokens.size() < static_cast<std::size_t>(kNumSpecial))
    throw Error("vocab", "vocab is missing the special tokens");
  for (int i = 0; i < kNumSpecial; ++i)
    if (tokens[static_cast<std::size_t>(i)] != v.token(i))
      throw Error("vocab", "special token at id " + std::to_string(i) + " does not match");
  for (std::size_t i = kNumSpecial; i < tokens.size(); ++i)
    if (v.add(tokens[i]) != static_cast<int>(i)) throw Error("vocab", "duplicate token '" + tokens[i] + "'");
  return v;
}

void Vocab::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("io", "cannot write " + path);
  out << to_json() << '\n';
}

Vocab Vocab::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

} // namespace logigraph
