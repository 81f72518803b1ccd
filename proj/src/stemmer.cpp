// SPDX-License-Identifier: Apache-2.0
#include "logigraph/stemmer.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace logigraph {
namespace {

class Porter {
public:
  explicit Porter(std::string w) : b_(std::move(w)) {}

  std::string run() {
    if (b_.size() <= 2) return b_;
    step1ab();
    step1c();
    step2();
    step3();
    step4();
    step5();
    return b_;
  }

private:
  std::string b_;
  int j_ = 0; // end of the stem under test (exclusive upper bound is j_+1)

  int k() const { return static_cast<int>(b_.size()) - 1; }

  bool cons(int i) const {
    switch (b_[static_cast<std::size_t>(i)]) {
    case 'a': case 'e': case 'i': case 'o': case 'u': return false;
    case 'y': return i == 0 ? true : !cons(i - 1);
    default: return true;
    }
  }

  // Number of VC sequences in b_[0..j_].
  int m() const {
    int n = 0, i = 0;
    while (true) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool doublec(int i) const {
    if (i < 1) return false;
    if (b_[static_cast<std::size_t>(i)] != b_[static_cast<std::size_t>(i - 1)]) return false;
    return cons(i);
  }

  // cvc at i-2..i, last consonant not w, x or y.
  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    char ch = b_[static_cast<std::size_t>(i)];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(std::string_view s) {
    if (s.size() > b_.size()) return false;
    if (b_.compare(b_.size() - s.size(), s.size(), s) != 0) return false;
    j_ = k() - static_cast<int>(s.size());
    return true;
  }

  void setto(std::string_view s) { b_ = b_.substr(0, static_cast<std::size_t>(j_ + 1)) + std::string(s); }

  void r(std::string_view s) {
    if (m() > 0) setto(s);
  }

  void step1ab() {
    if (b_.back() == 's') {
      if (ends("sses")) b_.resize(b_.size() - 2);
      else if (ends("ies")) setto("i");
      else if (b_.size() >= 2 && b_[b_.size() - 2] != 's') b_.pop_back();
    }
    if (ends("eed")) {
      if (m() > 0) b_.pop_back();
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      b_.resize(static_cast<std::size_t>(j_ + 1));
      if (ends("at")) setto("ate");
      else if (ends("bl")) setto("ble");
      else if (ends("iz")) setto("ize");
      else if (doublec(k())) {
        char ch = b_.back();
        if (ch != 'l' && ch != 's' && ch != 'z') b_.pop_back();
      } else {
        j_ = k();
        if (m() == 1 && cvc(k())) b_.push_back('e');
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_.back() = 'i';
  }

  void step2() {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 21> rules{{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
        {"izer", "ize"},    {"bli", "ble"},     {"alli", "al"},    {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
        {"logi", "log"},
    }};
    for (const auto& [suffix, repl] : rules) {
      if (ends(suffix)) {
        r(repl);
        return;
      }
    }
  }

  void step3() {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 7> rules{{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    for (const auto& [suffix, repl] : rules) {
      if (ends(suffix)) {
        r(repl);
        return;
      }
    }
  }

  void step4() {
    static constexpr std::array<std::string_view, 19> suffixes{
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
        "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
    for (auto s : suffixes) {
      // "ement" and "ment" are tried before "ent"; list order handles that.
      if (!ends(s)) continue;
      if (s == "ion") {
        if (j_ < 0 || (b_[static_cast<std::size_t>(j_)] != 's' && b_[static_cast<std::size_t>(j_)] != 't'))
          return;
      }
      if (m() > 1) b_.resize(static_cast<std::size_t>(j_ + 1));
      return;
    }
  }

  void step5() {
    j_ = k();
    if (b_.back() == 'e') {
      j_ = k() - 1;
      int a = m();
      if (a > 1 || (a == 1 && !cvc(k() - 1))) b_.pop_back();
    }
    j_ = k();
    if (b_.back() == 'l' && doublec(k()) && m() > 1) b_.pop_back();
  }
};

} // namespace

std::string stem(std::string_view word) {
  if (word.size() <= 2) return std::string(word);
  if (!std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
    return std::string(word);
  return Porter(std::string(word)).run();
}

} // namespace logigraph
