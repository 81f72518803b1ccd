// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_TOPIC_TERMS_HPP
#define LOGIGRAPH_TOPIC_TERMS_HPP

#include "logigraph/segmentation.hpp"

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace logigraph {

using StopwordSet = std::set<std::string, std::less<>>;

/// Built-in English function-word list.
const StopwordSet& default_stopwords();

/// One word per line; blank lines ignored.
StopwordSet load_stopwords(const std::optional<std::string>& path = std::nullopt);

struct TermOccurrence {
  int node = 0;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const TermOccurrence&) const = default;
};

/// A recurring stemmed n-gram, standing in for a logical variable.
struct TopicTerm {
  std::vector<std::string> stems;
  /// Occurrences that survived overlap filtering; these tag nodes.
  std::vector<TermOccurrence> occurrences;
  /// Occurrence count before overlap filtering (always >= 2).
  int frequency = 0;

  std::string key() const;
  std::set<int> nodes() const;
};

/// Sliding-window recurring-phrase detection over the whole sample.
///
/// Windows of 1..max_n stemmed words inside one unit are counted; phrases
/// seen at least twice that neither start nor end with a stopword are kept.
/// Longer phrases then claim their token positions first, so a shorter
/// phrase only keeps occurrences that touch no claimed position.
std::vector<TopicTerm> detect_terms(std::span<const Edu> edus, std::span<const std::string> tokens,
                                    const StopwordSet& stopwords, int max_n = 4);

/// True for tokens that can take part in a term (has a letter or digit, not a marker).
bool is_term_token(std::string_view token);

} // namespace logigraph

#endif // LOGIGRAPH_TOPIC_TERMS_HPP
