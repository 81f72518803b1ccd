// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_DELIMITERS_HPP
#define LOGIGRAPH_DELIMITERS_HPP

#include "logigraph/fwd.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace logigraph {

enum class DelimiterKind { Explicit, Implicit };

inline const char* to_string(DelimiterKind k) {
  return k == DelimiterKind::Explicit ? "explicit" : "implicit";
}

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kConcat = "\xE2\x80\x96"; // U+2016 double vertical line

/// Discourse-aware delimiter library: explicit connectives (multi-token
/// phrases) and punctuation-style implicit delimiters.
class DelimiterLibrary {
public:
  using Phrase = std::vector<std::string>;

  DelimiterLibrary() = default;
  DelimiterLibrary(std::vector<Phrase> explicit_phrases, std::vector<std::string> implicit_tokens);

  /// Built-in connective inventory.
  static DelimiterLibrary builtin();

  const std::vector<Phrase>& explicit_phrases() const { return explicit_; }
  const std::vector<std::string>& implicit_tokens() const { return implicit_; }

  bool contains_explicit(std::span<const std::string> phrase) const;
  bool contains_implicit(std::string_view token) const;
  std::size_t max_phrase_length() const { return max_len_; }

  /// Length of the longest explicit phrase starting at `tokens[pos]`, 0 if none.
  std::size_t longest_explicit_at(std::span<const std::string> tokens, std::size_t pos) const;

private:
  std::vector<Phrase> explicit_;
  std::vector<std::string> implicit_;
  std::size_t max_len_ = 0;
};

struct DelimiterHit {
  std::size_t start = 0;
  std::size_t end = 0; // exclusive
  DelimiterKind kind = DelimiterKind::Implicit;
  std::string surface;

  bool operator==(const DelimiterHit&) const = default;
};

/// Loads the built-in library, or an override file of `phrase<TAB>kind` lines.
DelimiterLibrary load_library(const std::optional<std::string>& override_path = std::nullopt);

/// Parses override text; errors name the offending 1-based line.
DelimiterLibrary parse_library(std::string_view text);

/// Raw longest-match scan with no suppression rules applied.
std::vector<DelimiterHit> scan_delimiters(std::span<const std::string> tokens,
                                          const DelimiterLibrary& lib);

/// Greedy left-to-right longest-match scan over lowercased tokens.
///
/// Implicit hits touching an explicit hit are dropped, as is any hit at
/// position 0 (nothing to its left to delimit).
std::vector<DelimiterHit> find_delimiters(std::span<const std::string> tokens,
                                          const DelimiterLibrary& lib);

/// Lowercases and splits on whitespace; punctuation becomes standalone tokens.
/// Letters, digits, apostrophes, hyphens and non-ASCII bytes stay inside words.
std::vector<std::string> tokenize(std::string_view text);

} // namespace logigraph

#endif // LOGIGRAPH_DELIMITERS_HPP
