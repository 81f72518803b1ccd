// SPDX-License-Identifier: Apache-2.0
#include "logigraph/segmentation.hpp"

#include <algorithm>

namespace logigraph {

Granularity parse_granularity(std::string_view s) {
  if (s == "edu") return Granularity::Edu;
  if (s == "clause") return Granularity::Clause;
  if (s == "sentence") return Granularity::Sentence;
  throw Error("usage", "unknown node granularity '" + std::string(s) + "'");
}

const char* to_string(Granularity g) {
  switch (g) {
  case Granularity::Edu: return "edu";
  case Granularity::Clause: return "clause";
  case Granularity::Sentence: return "sentence";
  }
  return "?";
}

namespace {

DelimiterLibrary reduced_library(const DelimiterLibrary& lib, Granularity g) {
  if (g == Granularity::Sentence) return DelimiterLibrary({}, {"."});
  return DelimiterLibrary({}, lib.implicit_tokens());
}

} // namespace

Segmentation segment(const TokenizedText& text, const DelimiterLibrary& lib,
                     Granularity granularity) {
  const auto& tokens = text.tokens;
  const std::size_t n = tokens.size();
  Segmentation out;
  if (n == 0) return out;

  // Tokens covered by any library match are delimiter material, never content,
  // whatever granularity is being cut.
  std::vector<bool> content(n, true);
  for (const auto& h : scan_delimiters(tokens, lib))
    for (std::size_t i = h.start; i < h.end; ++i) content[i] = false;

  const auto hits = granularity == Granularity::Edu
                        ? find_delimiters(tokens, lib)
                        : find_delimiters(tokens, reduced_library(lib, granularity));

  std::vector<int> content_before(n + 1, 0); // content tokens in [0, i)
  for (std::size_t i = 0; i < n; ++i) content_before[i + 1] = content_before[i] + content[i];
  const int total_content = content_before[n];
  // gap_start[i]: first position after the last content token before i, so the
  // whole delimiter run (suppressed punctuation included) opens the next unit.
  std::vector<std::size_t> gap_start(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) gap_start[i + 1] = content[i] ? i + 1 : gap_start[i];

  struct Boundary {
    std::size_t pos;
    int gap; // content count before the hit; equal for hits in one gap
    DelimiterHit hit;
  };
  std::vector<Boundary> bounds;
  for (const auto& h : hits) {
    const int before = content_before[h.start];
    const int after = total_content - content_before[h.end];
    if (before == 0 || after == 0) continue; // leading or trailing
    if (!bounds.empty() && bounds.back().gap == before) {
      if (bounds.back().hit.kind == DelimiterKind::Implicit && h.kind == DelimiterKind::Explicit)
        bounds.back().hit = h;
      continue;
    }
    bounds.push_back({gap_start[h.start], before, h});
  }

  std::size_t start = 0;
  for (std::size_t b = 0; b <= bounds.size(); ++b) {
    Edu e;
    e.id = static_cast<int>(out.edus.size());
    e.start = start;
    e.end = b < bounds.size() ? bounds[b].pos : n;
    e.origin = text.origin;
    if (b > 0) e.leading_connective = bounds[b - 1].hit;
    out.edus.push_back(std::move(e));
    if (b < bounds.size()) start = bounds[b].pos;
  }

  out.pos_map.node_of.resize(n);
  for (const auto& e : out.edus)
    std::fill(out.pos_map.node_of.begin() + static_cast<std::ptrdiff_t>(e.start),
              out.pos_map.node_of.begin() + static_cast<std::ptrdiff_t>(e.end), e.id);
  return out;
}

} // namespace logigraph
