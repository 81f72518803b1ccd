// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_SEGMENTATION_HPP
#define LOGIGRAPH_SEGMENTATION_HPP

#include "logigraph/delimiters.hpp"

#include <optional>
#include <string>
#include <vector>

namespace logigraph {

enum class Granularity { Edu, Clause, Sentence };

Granularity parse_granularity(std::string_view s);
const char* to_string(Granularity g);

struct TokenizedText {
  std::vector<std::string> tokens;
  Origin origin = Origin::Context;
};

/// Elementary discourse unit: a contiguous token span that becomes one node.
struct Edu {
  int id = 0;
  std::size_t start = 0;
  std::size_t end = 0; // exclusive
  Origin origin = Origin::Context;
  /// Delimiter that opened this unit; Explicit wins when several sit in the gap.
  std::optional<DelimiterHit> leading_connective;

  std::size_t size() const { return end - start; }
};

/// Token position -> node index.
struct PositionMap {
  std::vector<int> node_of;

  int operator()(std::size_t l) const { return node_of[l]; }
  std::size_t size() const { return node_of.size(); }
  int node_count() const { return node_of.empty() ? 0 : node_of.back() + 1; }
};

struct Segmentation {
  std::vector<Edu> edus;
  PositionMap pos_map;
};

/// Splits `text` into units. Edu splits on every hit, Clause only on
/// punctuation, Sentence only on ".". Delimiter tokens open the unit that
/// follows them; a delimiter with nothing after it stays in the last unit.
Segmentation segment(const TokenizedText& text, const DelimiterLibrary& lib,
                     Granularity granularity = Granularity::Edu);

} // namespace logigraph

#endif // LOGIGRAPH_SEGMENTATION_HPP
