// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_SAMPLE_HPP
#define LOGIGRAPH_SAMPLE_HPP

#include "logigraph/fwd.hpp"

#include <optional>
#include <string>
#include <vector>

namespace logigraph {

enum class SampleMode { Qa, Dialogue };

/// One multiple-choice instance: (passage, question, options) or
/// (dialogue context, candidate responses).
struct Sample {
  std::string id;
  SampleMode mode = SampleMode::Qa;
  std::string context;
  std::optional<std::string> question;
  std::vector<std::string> options;
  int label = 0;

  int num_candidates() const { return static_cast<int>(options.size()); }
};

/// Parses one JSONL line; throws Error("schema", ...) naming the bad field.
Sample parse_sample(std::string_view json_line);
std::string sample_to_json(const Sample& s);

/// Reads a JSONL file. Errors carry the 1-based line number.
std::vector<Sample> read_samples(const std::string& path);
void write_samples(const std::string& path, const std::vector<Sample>& samples);

/// The token sequence fed to the encoder and graph builder for candidate c:
/// "<s> passage </s> question ‖ option </s>" or "<s> dialogue </s> response".
struct SequenceLayout {
  std::vector<std::string> tokens;
  /// Index of the first candidate-side token (the first token after the first </s>).
  std::size_t boundary = 0;
};

/// Builds the sequence for candidate c and truncates it to max_len tokens.
/// Passage tokens are dropped first, then the tail of the candidate text;
/// a trailing </s> is kept in QA mode.
SequenceLayout assemble_sequence(const Sample& s, int c, int max_len);

} // namespace logigraph

#endif // LOGIGRAPH_SAMPLE_HPP
