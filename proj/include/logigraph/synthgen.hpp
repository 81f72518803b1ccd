// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_SYNTHGEN_HPP
#define LOGIGRAPH_SYNTHGEN_HPP

#include "logigraph/sample.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace logigraph {

enum class SynthMode { VariableLink, ConnectivePattern, Mixed };
SynthMode parse_synth_mode(std::string_view s);
const char* to_string(SynthMode m);

struct SynthSpec {
  int n_samples = 1000;
  int candidates = 4;
  /// Size of the pseudo-noun pool drawn from.
  int vocab_size = 400;
  SynthMode mode = SynthMode::VariableLink;
  /// Probability that a wrong option reuses nouns from the context instead of fresh ones.
  double distractor_overlap = 0.8;
  std::uint64_t seed = 0;
  /// Facts in each context; each fact is "a v b because c v d ."
  int facts = 3;
  /// 1: the gold option repeats the conclusion's nouns. 2: it repeats the
  /// nouns of the clause explicitly attached to the conclusion.
  int hops = 1;
  double train_fraction = 0.8;
  double dev_fraction = 0.1;
};

/// Named settings: variable-link (alias structural), variable-link-2hop,
/// lexical-trap, connective-pattern, mixed.
SynthSpec synth_preset(std::string_view name);
std::vector<std::string> synth_preset_names();

std::vector<Sample> generate(const SynthSpec& spec);

struct SynthSplits {
  std::vector<Sample> train, dev, test;
};
/// Generates and cuts in order: the first train_fraction, then dev, then the rest.
SynthSplits generate_splits(const SynthSpec& spec);

/// Pseudo-noun pool of the given size (CVCV words that stem to themselves).
std::vector<std::string> synth_nouns(int count);

/// Bag-of-words baseline: the option with the most distinct tokens also found
/// in the context; ties go to the lower index.
int bag_of_words_choice(const Sample& s);

} // namespace logigraph

#endif // LOGIGRAPH_SYNTHGEN_HPP
