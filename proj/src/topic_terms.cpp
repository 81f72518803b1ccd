// SPDX-License-Identifier: Apache-2.0
#include "logigraph/topic_terms.hpp"

#include "logigraph/stemmer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

namespace logigraph {
namespace {

constexpr const char* kStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
    "are", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
    "but", "by", "can", "cannot", "could", "did", "do", "does", "doing", "down", "during",
    "each", "either", "else", "even", "ever", "every", "few", "for", "from", "further", "had",
    "has", "have", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his",
    "how", "however", "i", "if", "in", "into", "is", "it", "its", "itself", "just", "may",
    "me", "might", "more", "most", "must", "my", "myself", "neither", "no", "nor", "not", "now",
    "of", "off", "on", "once", "one", "only", "or", "other", "our", "ours", "ourselves", "out",
    "over", "own", "same", "shall", "she", "should", "since", "so", "some", "such", "than",
    "that", "the", "their", "theirs", "them", "themselves", "then", "there", "therefore",
    "these", "they", "this", "those", "though", "through", "thus", "to", "too", "under",
    "until", "up", "upon", "us", "very", "was", "we", "were", "what", "when", "where",
    "whether", "which", "while", "who", "whom", "why", "will", "with", "would", "yet", "you",
    "your", "yours", "yourself", "yourselves", "although", "unless", "whereas", "hence",
    "many", "much", "any", "none", "whose", "whatever", "therein"};

} // namespace

const StopwordSet& default_stopwords() {
  static const StopwordSet set(std::begin(kStopwords), std::end(kStopwords));
  return set;
}

StopwordSet load_stopwords(const std::optional<std::string>& path) {
  if (!path) return default_stopwords();
  std::ifstream in(*path);
  if (!in) throw Error("io", "cannot open stopword file '" + *path + "'");
  StopwordSet out;
  std::string line;
  while (std::getline(in, line)) {
    std::string w;
    for (unsigned char c : line)
      if (!std::isspace(c)) w.push_back(static_cast<char>(std::tolower(c)));
    if (!w.empty()) out.insert(w);
  }
  return out;
}

std::string TopicTerm::key() const {
  std::string k;
  for (std::size_t i = 0; i < stems.size(); ++i) {
    if (i) k += ' ';
    k += stems[i];
  }
  return k;
}

std::set<int> TopicTerm::nodes() const {
  std::set<int> s;
  for (const auto& o : occurrences) s.insert(o.node);
  return s;
}

bool is_term_token(std::string_view token) {
  if (token == kBos || token == kEos || token == kConcat) return false;
  return std::any_of(token.begin(), token.end(),
                     [](unsigned char c) { return std::isalnum(c) || c >= 0x80; });
}

std::vector<TopicTerm> detect_terms(std::span<const Edu> edus, std::span<const std::string> tokens,
                                    const StopwordSet& stopwords, int max_n) {
  if (max_n < 1) throw Error("usage", "max_n must be >= 1");
  const std::size_t L = tokens.size();
  std::vector<int> node_of(L, -1);
  for (const auto& e : edus)
    for (std::size_t i = e.start; i < e.end && i < L; ++i) node_of[i] = e.id;

  std::vector<std::string> stems(L);
  std::vector<bool> usable(L), stop(L);
  for (std::size_t i = 0; i < L; ++i) {
    usable[i] = is_term_token(tokens[i]) && node_of[i] >= 0;
    stop[i] = stopwords.contains(tokens[i]);
    if (usable[i]) stems[i] = stem(tokens[i]);
  }

  struct Candidate {
    std::vector<std::string> stems;
    std::vector<TermOccurrence> occ;
  };
  std::map<std::vector<std::string>, Candidate> table;
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t n = 1; n <= static_cast<std::size_t>(max_n) && i + n <= L; ++n) {
      const std::size_t last = i + n - 1;
      if (!usable[last] || node_of[last] != node_of[i]) break;
      if (stop[i] || stop[last]) continue;
      std::vector<std::string> key(stems.begin() + static_cast<std::ptrdiff_t>(i),
                                   stems.begin() + static_cast<std::ptrdiff_t>(i + n));
      auto& c = table[key];
      c.stems = key;
      c.occ.push_back({node_of[i], i, i + n});
    }
  }

  std::vector<Candidate*> order;
  for (auto& [k, c] : table)
    if (c.occ.size() >= 2) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const Candidate* a, const Candidate* b) {
    if (a->stems.size() != b->stems.size()) return a->stems.size() > b->stems.size();
    return a->occ.front().start < b->occ.front().start;
  });

  std::vector<bool> claimed(L, false);
  std::vector<TopicTerm> terms;
  for (const Candidate* c : order) {
    TopicTerm t;
    t.stems = c->stems;
    t.frequency = static_cast<int>(c->occ.size());
    // Self-overlapping occurrences of one phrase ("a a a") claim greedily too.
    for (const auto& o : c->occ) {
      bool free = true;
      for (std::size_t i = o.start; i < o.end; ++i) free = free && !claimed[i];
      if (!free) continue;
      for (std::size_t i = o.start; i < o.end; ++i) claimed[i] = true;
      t.occurrences.push_back(o);
    }
    if (!t.occurrences.empty()) terms.push_back(std::move(t));
  }

  std::sort(terms.begin(), terms.end(), [](const TopicTerm& a, const TopicTerm& b) {
    if (a.occurrences.front().start != b.occurrences.front().start)
      return a.occurrences.front().start < b.occurrences.front().start;
    return a.stems.size() > b.stems.size();
  });
  return terms;
}

} // namespace logigraph
