// SPDX-License-Identifier: Apache-2.0
#include "logigraph/delimiters.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace logigraph {
namespace {

// PDTB explicit connectives. Discontinuous pairs ("either or", "if then",
// "neither nor", "before and after", "when and if", "on the one hand on the
// other hand") are left out; their contiguous members are listed on their own.
constexpr const char* kExplicitConnectives[] = {
    "once", "although", "though", "but", "because", "nevertheless", "before",
    "for example", "until", "if", "previously", "when", "and", "so", "then",
    "while", "as long as", "however", "also", "after", "separately", "still",
    "so that", "or", "moreover", "in addition", "instead", "on the other hand",
    "as", "for instance", "nonetheless", "unless", "meanwhile", "yet", "since",
    "rather", "in fact", "indeed", "later", "ultimately", "as a result",
    "therefore", "in turn", "thus", "in particular", "further", "afterward",
    "next", "similarly", "besides", "if and when", "nor", "alternatively",
    "whereas", "overall", "by comparison", "till", "in contrast", "finally",
    "otherwise", "as if", "thereby", "now that", "additionally", "meantime",
    "by contrast", "likewise", "in the end", "regardless", "thereafter",
    "earlier", "in other words", "as soon as", "except", "in short",
    "furthermore", "lest", "as though", "specifically", "conversely",
    "consequently", "as well", "much as", "plus", "hence", "by then",
    "accordingly", "on the contrary", "simultaneously", "for", "in sum",
    "insofar as", "else", "as an alternative",
};

constexpr const char* kImplicitDelimiters[] = {".", ",", ";", ":", "?", "!", "<s>", "</s>"};

DelimiterLibrary::Phrase split_words(std::string_view phrase) {
  DelimiterLibrary::Phrase out;
  std::istringstream in{std::string(phrase)};
  std::string w;
  while (in >> w) {
    std::transform(w.begin(), w.end(), w.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out.push_back(w);
  }
  return out;
}

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c == '\'' || c == '-' || c == '_' || c >= 0x80;
}

} // namespace

DelimiterLibrary::DelimiterLibrary(std::vector<Phrase> explicit_phrases,
                                   std::vector<std::string> implicit_tokens) {
  std::set<Phrase> seen;
  for (auto& p : explicit_phrases) {
    if (p.empty() || !seen.insert(p).second) continue;
    max_len_ = std::max(max_len_, p.size());
    explicit_.push_back(std::move(p));
  }
  std::set<std::string> seen_imp;
  for (auto& t : implicit_tokens) {
    if (seen_imp.insert(t).second) implicit_.push_back(std::move(t));
  }
  for (const auto& p : explicit_) {
    if (p.size() == 1 && seen_imp.contains(p.front()))
      throw Error("library", "token '" + p.front() + "' is both explicit and implicit");
  }
}

DelimiterLibrary DelimiterLibrary::builtin() {
  std::vector<Phrase> exp;
  for (const char* c : kExplicitConnectives) exp.push_back(split_words(c));
  std::vector<std::string> imp(std::begin(kImplicitDelimiters), std::end(kImplicitDelimiters));
  return DelimiterLibrary(std::move(exp), std::move(imp));
}

bool DelimiterLibrary::contains_explicit(std::span<const std::string> phrase) const {
  return std::any_of(explicit_.begin(), explicit_.end(), [&](const Phrase& p) {
    return std::equal(p.begin(), p.end(), phrase.begin(), phrase.end());
  });
}

bool DelimiterLibrary::contains_implicit(std::string_view token) const {
  return std::find(implicit_.begin(), implicit_.end(), token) != implicit_.end();
}

std::size_t DelimiterLibrary::longest_explicit_at(std::span<const std::string> tokens,
                                                  std::size_t pos) const {
  std::size_t best = 0;
  for (const auto& p : explicit_) {
    if (p.size() <= best || pos + p.size() > tokens.size()) continue;
    if (std::equal(p.begin(), p.end(), tokens.begin() + static_cast<std::ptrdiff_t>(pos)))
      best = p.size();
  }
  return best;
}

DelimiterLibrary parse_library(std::string_view text) {
  std::vector<DelimiterLibrary::Phrase> exp;
  std::vector<std::string> imp;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto tab = line.rfind('\t');
    auto bad = [&](const std::string& why) {
      return Error("library", "line " + std::to_string(lineno) + ": " + why);
    };
    if (tab == std::string::npos) throw bad("expected 'phrase<TAB>kind'");
    auto phrase = split_words(line.substr(0, tab));
    std::string kind = line.substr(tab + 1);
    if (phrase.empty()) throw bad("empty phrase");
    if (kind == "explicit") {
      if (phrase.size() > 6) throw bad("explicit phrase longer than 6 tokens");
      exp.push_back(std::move(phrase));
    } else if (kind == "implicit") {
      if (phrase.size() != 1) throw bad("implicit delimiter must be a single token");
      imp.push_back(phrase.front());
    } else {
      throw bad("unknown kind '" + kind + "'");
    }
  }
  return DelimiterLibrary(std::move(exp), std::move(imp));
}

DelimiterLibrary load_library(const std::optional<std::string>& override_path) {
  if (!override_path) return DelimiterLibrary::builtin();
  std::ifstream in(*override_path);
  if (!in) throw Error("io", "cannot open delimiter library '" + *override_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_library(ss.str());
}

std::vector<DelimiterHit> scan_delimiters(std::span<const std::string> tokens,
                                          const DelimiterLibrary& lib) {
  std::vector<DelimiterHit> raw;
  for (std::size_t i = 0; i < tokens.size();) {
    std::size_t n = lib.longest_explicit_at(tokens, i);
    if (n > 0) {
      std::string surface = tokens[i];
      for (std::size_t k = 1; k < n; ++k) surface += " " + tokens[i + k];
      raw.push_back({i, i + n, DelimiterKind::Explicit, std::move(surface)});
      i += n;
    } else if (lib.contains_implicit(tokens[i])) {
      raw.push_back({i, i + 1, DelimiterKind::Implicit, tokens[i]});
      ++i;
    } else {
      ++i;
    }
  }
  return raw;
}

std::vector<DelimiterHit> find_delimiters(std::span<const std::string> tokens,
                                          const DelimiterLibrary& lib) {
  const auto raw = scan_delimiters(tokens, lib);
  std::vector<DelimiterHit> hits;
  for (std::size_t h = 0; h < raw.size(); ++h) {
    const auto& hit = raw[h];
    if (hit.start == 0) continue;
    if (hit.kind == DelimiterKind::Implicit) {
      bool touches_explicit =
          (h > 0 && raw[h - 1].kind == DelimiterKind::Explicit && raw[h - 1].end == hit.start) ||
          (h + 1 < raw.size() && raw[h + 1].kind == DelimiterKind::Explicit &&
           raw[h + 1].start == hit.end);
      if (touches_explicit) continue;
    }
    hits.push_back(hit);
  }
  return hits;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      flush();
    } else if (is_word_byte(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
      out.emplace_back(1, static_cast<char>(c));
    }
  }
  flush();
  return out;
}

} // namespace logigraph
