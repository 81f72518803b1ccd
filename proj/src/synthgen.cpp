// SPDX-License-Identifier: Apache-2.0
#include "logigraph/synthgen.hpp"

#include "logigraph/delimiters.hpp"
#include "logigraph/stemmer.hpp"
#include "logigraph/topic_terms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace logigraph {

namespace {

using Rng = std::mt19937_64;

// Template vocabulary, version 1. Context and option verbs never overlap so
// the only words an option can share with its context are nouns.
constexpr const char* kContextVerbs[] = {"feeds", "guards", "lifts", "pulls", "holds", "drives", "warms", "shapes"};
constexpr const char* kOptionVerbs[] = {"matches", "mirrors", "echoes", "rivals"};
constexpr const char* kCausalOption[] = {"therefore", "thus", "hence", "consequently"};
constexpr const char* kContrastOption[] = {"however", "but", "nevertheless", "nonetheless"};
constexpr const char* kVariableQuestion = "which claim is supported ?";
constexpr const char* kPatternQuestion = "which continuation fits ?";

std::uint64_t fmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Per-sample seed. Hashing the dataset seed first keeps nearby seeds from
/// producing shifted copies of the same sample stream.
std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return fmix(fmix(a) ^ b); }

template <typename T, std::size_t N>
const T& pick(const T (&arr)[N], Rng& rng) {
  return arr[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

struct Fact {
  std::string a, va, b, c, vc, d;
};

std::string fact_text(const Fact& f, bool conclusion, const char* link) {
  std::string s = conclusion ? "we conclude that " : "";
  return s + f.a + " " + f.va + " " + f.b + " " + link + " " + f.c + " " + f.vc + " " + f.d + " .";
}

std::string option_text(const std::string& n1, const std::string& n2, Rng& rng) {
  return n1 + " " + pick(kOptionVerbs, rng) + " " + n2;
}

/// Draws `count` distinct nouns from the pool.
std::vector<std::string> draw_nouns(const std::vector<std::string>& pool, std::size_t count, Rng& rng) {
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> d(i, idx.size() - 1);
    std::swap(idx[i], idx[d(rng)]);
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(pool[idx[i]]);
  return out;
}

/// Places the gold option at a uniformly drawn position.
void place(Sample& s, std::string gold, std::vector<std::string> wrong, Rng& rng) {
  const int C = static_cast<int>(wrong.size()) + 1;
  const int label = std::uniform_int_distribution<int>(0, C - 1)(rng);
  s.options.clear();
  std::size_t w = 0;
  for (int i = 0; i < C; ++i) s.options.push_back(i == label ? gold : wrong[w++]);
  s.label = label;
}

Sample variable_link(const SynthSpec& spec, const std::vector<std::string>& nouns, Rng& rng) {
  const int k = spec.facts;
  const int C = spec.candidates;
  auto pool = draw_nouns(nouns, static_cast<std::size_t>(4 * k + 2 * (C - 1)), rng);
  std::vector<Fact> facts(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    auto* n = &pool[static_cast<std::size_t>(4 * i)];
    facts[static_cast<std::size_t>(i)] = {n[0], pick(kContextVerbs, rng), n[1], n[2], pick(kContextVerbs, rng), n[3]};
  }
  const int lo = spec.hops >= 2 ? 1 : 0;
  const int concl = std::uniform_int_distribution<int>(lo, k - 1)(rng);

  // Clauses in reading order: 2*i is the head of fact i, 2*i+1 its "because" part.
  auto clause_nouns = [&](int clause) -> std::pair<std::string, std::string> {
    const auto& f = facts[static_cast<std::size_t>(clause / 2)];
    return clause % 2 == 0 ? std::pair{f.a, f.b} : std::pair{f.c, f.d};
  };
  const int head = 2 * concl;
  const int target = spec.hops >= 2 ? head + 1 : head;

  std::vector<int> others;
  for (int cl = 0; cl < 2 * k; ++cl)
    if (cl != head && cl != target) others.push_back(cl);
  std::shuffle(others.begin(), others.end(), rng);
  if (spec.hops >= 2) {
    // The clause right before the conclusion is its implicit neighbour; offer it first.
    auto it = std::find(others.begin(), others.end(), head - 1);
    std::rotate(others.begin(), it, it + 1);
  }

  Sample s;
  s.mode = SampleMode::Qa;
  std::string ctx;
  for (int i = 0; i < k; ++i) {
    if (i) ctx += ' ';
    ctx += fact_text(facts[static_cast<std::size_t>(i)], i == concl, "because");
  }
  s.context = ctx;
  s.question = kVariableQuestion;
  const auto [g1, g2] = clause_nouns(target);
  std::vector<std::string> wrong;
  std::bernoulli_distribution overlap(spec.distractor_overlap);
  std::size_t next_other = 0;
  std::size_t next_fresh = static_cast<std::size_t>(4 * k);
  for (int d = 0; d < C - 1; ++d) {
    if (overlap(rng) && next_other < others.size()) {
      const auto [n1, n2] = clause_nouns(others[next_other++]);
      wrong.push_back(option_text(n1, n2, rng));
    } else {
      wrong.push_back(option_text(pool[next_fresh], pool[next_fresh + 1], rng));
      next_fresh += 2;
    }
  }
  place(s, option_text(g1, g2, rng), std::move(wrong), rng);
  return s;
}

Sample connective_pattern(const SynthSpec& spec, const std::vector<std::string>& nouns, Rng& rng) {
  const int k = spec.facts;
  const int C = spec.candidates;
  auto pool = draw_nouns(nouns, static_cast<std::size_t>(4 * k), rng);
  std::vector<Fact> facts(static_cast<std::size_t>(k));
  std::vector<bool> causal(static_cast<std::size_t>(k));
  std::bernoulli_distribution coin(0.5);
  std::string ctx;
  for (int i = 0; i < k; ++i) {
    auto* n = &pool[static_cast<std::size_t>(4 * i)];
    auto& f = facts[static_cast<std::size_t>(i)];
    f = {n[0], pick(kContextVerbs, rng), n[1], n[2], pick(kContextVerbs, rng), n[3]};
    causal[static_cast<std::size_t>(i)] = coin(rng);
    if (i) ctx += ' ';
    ctx += fact_text(f, false, causal[static_cast<std::size_t>(i)] ? "because" : "although");
  }
  const int t = std::uniform_int_distribution<int>(0, k - 1)(rng);
  const auto& f = facts[static_cast<std::size_t>(t)];
  const bool is_causal = causal[static_cast<std::size_t>(t)];

  // Every option repeats the same nouns; only the connective differs.
  std::vector<std::string> good(std::begin(kCausalOption), std::end(kCausalOption));
  std::vector<std::string> bad(std::begin(kContrastOption), std::end(kContrastOption));
  if (!is_causal) std::swap(good, bad);
  std::shuffle(bad.begin(), bad.end(), rng);
  const std::string verb = pick(kOptionVerbs, rng);
  auto opt = [&](const std::string& conn) { return conn + " " + f.a + " " + verb + " " + f.b; };
  std::vector<std::string> wrong;
  for (int d = 0; d < C - 1; ++d) wrong.push_back(opt(bad[static_cast<std::size_t>(d) % bad.size()]));

  Sample s;
  s.mode = SampleMode::Qa;
  s.context = ctx;
  s.question = kPatternQuestion;
  place(s, opt(good[std::uniform_int_distribution<std::size_t>(0, good.size() - 1)(rng)]), std::move(wrong), rng);
  return s;
}

void validate(const SynthSpec& spec) {
  if (spec.candidates < 2) throw Error("usage", "synth: need at least 2 candidates");
  if (spec.n_samples < 0) throw Error("usage", "synth: sample count must not be negative");
  if (!(spec.distractor_overlap >= 0.0 && spec.distractor_overlap <= 1.0))
    throw Error("usage", "synth: distractor_overlap must lie in [0, 1]");
  if (spec.facts < 2) throw Error("usage", "synth: need at least 2 facts per context");
  if (spec.hops != 1 && spec.hops != 2) throw Error("usage", "synth: hops must be 1 or 2");
  if (spec.mode == SynthMode::ConnectivePattern && spec.candidates - 1 > 4)
    throw Error("usage", "synth: connective-pattern supports at most 5 candidates");
  if (spec.train_fraction < 0 || spec.dev_fraction < 0 || spec.train_fraction + spec.dev_fraction > 1.0)
    throw Error("usage", "synth: split fractions must be non-negative and sum to at most 1");
  const int need = 4 * spec.facts + 2 * (spec.candidates - 1);
  if (spec.vocab_size < need)
    throw Error("usage", "synth: vocab_size " + std::to_string(spec.vocab_size) + " too small, need at least " +
                             std::to_string(need));
}

} // namespace

SynthMode parse_synth_mode(std::string_view s) {
  if (s == "variable-link") return SynthMode::VariableLink;
  if (s == "connective-pattern") return SynthMode::ConnectivePattern;
  if (s == "mixed") return SynthMode::Mixed;
  throw Error("usage", "unknown synth mode '" + std::string(s) + "'");
}

const char* to_string(SynthMode m) {
  switch (m) {
  case SynthMode::VariableLink: return "variable-link";
  case SynthMode::ConnectivePattern: return "connective-pattern";
  case SynthMode::Mixed: return "mixed";
  }
  return "?";
}

std::vector<std::string> synth_preset_names() {
  return {"variable-link", "structural", "variable-link-2hop", "lexical-trap", "connective-pattern", "mixed"};
}

SynthSpec synth_preset(std::string_view name) {
  SynthSpec s;
  if (name == "variable-link" || name == "structural") return s;
  if (name == "variable-link-2hop") {
    s.hops = 2;
    return s;
  }
  if (name == "lexical-trap") {
    s.distractor_overlap = 1.0;
    return s;
  }
  if (name == "connective-pattern") {
    s.mode = SynthMode::ConnectivePattern;
    return s;
  }
  if (name == "mixed") {
    s.mode = SynthMode::Mixed;
    return s;
  }
  throw Error("usage", "unknown synth preset '" + std::string(name) + "'");
}

std::vector<std::string> synth_nouns(int count) {
  static const std::vector<std::string> all = [] {
    const std::string cons = "bdfgklmnprstvz";
    const std::string vow = "aou";
    const auto& stop = default_stopwords();
    const auto lib = DelimiterLibrary::builtin();
    std::vector<std::string> out;
    for (char c1 : cons)
      for (char v1 : vow)
        for (char c2 : cons)
          for (char v2 : vow) {
            const std::string w{c1, v1, c2, v2};
            if (stem(w) != w || stop.count(w) || lib.contains_explicit(std::span<const std::string>(&w, 1))) continue;
            out.push_back(w);
          }
    return out;
  }();
  if (count < 0 || static_cast<std::size_t>(count) > all.size())
    throw Error("usage", "synth: vocab_size must be at most " + std::to_string(all.size()));
  return {all.begin(), all.begin() + count};
}

std::vector<Sample> generate(const SynthSpec& spec) {
  validate(spec);
  const auto nouns = synth_nouns(spec.vocab_size);
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(spec.n_samples));
  const int width = std::max(4, static_cast<int>(std::to_string(std::max(spec.n_samples - 1, 0)).size()));
  for (int i = 0; i < spec.n_samples; ++i) {
    Rng rng(mix(spec.seed, static_cast<std::uint64_t>(i)));
    SynthMode m = spec.mode;
    if (m == SynthMode::Mixed)
      m = std::bernoulli_distribution(0.5)(rng) ? SynthMode::VariableLink : SynthMode::ConnectivePattern;
    Sample s = m == SynthMode::VariableLink ? variable_link(spec, nouns, rng) : connective_pattern(spec, nouns, rng);
    std::string num = std::to_string(i);
    s.id = "syn-" + std::string(static_cast<std::size_t>(width) - std::min<std::size_t>(num.size(), width), '0') + num;
    out.push_back(std::move(s));
  }
  return out;
}

SynthSplits generate_splits(const SynthSpec& spec) {
  auto all = generate(spec);
  const auto n = all.size();
  const auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
  const auto n_dev = std::min(n - n_train, static_cast<std::size_t>(std::llround(spec.dev_fraction * static_cast<double>(n))));
  SynthSplits s;
  s.train.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.dev.assign(all.begin() + static_cast<std::ptrdiff_t>(n_train), all.begin() + static_cast<std::ptrdiff_t>(n_train + n_dev));
  s.test.assign(all.begin() + static_cast<std::ptrdiff_t>(n_train + n_dev), all.end());
  return s;
}

int bag_of_words_choice(const Sample& s) {
  const auto ctx = tokenize(s.context);
  const std::set<std::string> context(ctx.begin(), ctx.end());
  int best = 0;
  std::size_t best_count = 0;
  for (int i = 0; i < s.num_candidates(); ++i) {
    const auto toks = tokenize(s.options[static_cast<std::size_t>(i)]);
    const std::set<std::string> opt(toks.begin(), toks.end());
    std::size_t n = 0;
    for (const auto& t : opt) n += context.count(t);
    if (n > best_count) {
      best = i;
      best_count = n;
    }
  }
  return best;
}

} // namespace logigraph
