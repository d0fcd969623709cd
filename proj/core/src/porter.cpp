// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

// Porter's 1980 suffix-stripping algorithm, including the later LOGI->LOG
// amendment from the reference implementation. Operates on bytes; non-ASCII
// words pass through untouched because no rule suffix matches them.

#include <string>
#include <string_view>

namespace relarec {

namespace {

class Stemmer {
 public:
  explicit Stemmer(std::string_view word) : w_(word) {}

  std::string run() {
    if (w_.size() <= 2) return w_;
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return w_;
  }

 private:
  std::string w_;

  static bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }

  // A letter is a consonant unless it is a/e/i/o/u, or y preceded by a
  // consonant.
  bool consonant(std::size_t i) const {
    char c = w_[i];
    switch (c) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !consonant(i - 1);
      default:
        return true;
    }
  }

  // Measure m of w_[0..end): the number of VC sequences in [C](VC)^m[V].
  int measure(std::size_t end) const {
    int m = 0;
    std::size_t i = 0;
    while (i < end && consonant(i)) ++i;
    while (i < end) {
      while (i < end && !consonant(i)) ++i;
      if (i >= end) break;
      ++m;
      while (i < end && consonant(i)) ++i;
    }
    return m;
  }

  bool has_vowel(std::size_t end) const {
    for (std::size_t i = 0; i < end; ++i)
      if (!consonant(i)) return true;
    return false;
  }

  // *d: ends with a double consonant.
  bool double_consonant() const {
    std::size_t n = w_.size();
    return n >= 2 && w_[n - 1] == w_[n - 2] && consonant(n - 1);
  }

  // *o: ends consonant-vowel-consonant where the final consonant is not
  // w, x, or y. `end` is one past the last letter considered.
  bool cvc(std::size_t end) const {
    if (end < 3) return false;
    if (!consonant(end - 3) || consonant(end - 2) || !consonant(end - 1))
      return false;
    char c = w_[end - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends_with(std::string_view suffix) const {
    return w_.size() >= suffix.size() &&
           std::string_view(w_).substr(w_.size() - suffix.size()) == suffix;
  }

  std::size_t stem_len(std::string_view suffix) const {
    return w_.size() - suffix.size();
  }

  // Replace `suffix` with `repl` if measure of the remaining stem > min_m.
  bool replace_if(std::string_view suffix, std::string_view repl, int min_m) {
    if (!ends_with(suffix)) return false;
    std::size_t sl = stem_len(suffix);
    if (measure(sl) > min_m) {
      w_.replace(sl, suffix.size(), repl);
    }
    return true;  // suffix matched; stop scanning this rule group
  }

  void step1a() {
    if (ends_with("sses")) {
      w_.erase(w_.size() - 2);
    } else if (ends_with("ies")) {
      w_.erase(w_.size() - 2);
    } else if (ends_with("ss")) {
      // keep
    } else if (ends_with("s")) {
      w_.erase(w_.size() - 1);
    }
  }

  void step1b() {
    bool cleanup = false;
    if (ends_with("eed")) {
      if (measure(stem_len("eed")) > 0) w_.erase(w_.size() - 1);
    } else if (ends_with("ed")) {
      if (has_vowel(stem_len("ed"))) {
        w_.erase(w_.size() - 2);
        cleanup = true;
      }
    } else if (ends_with("ing")) {
      if (has_vowel(stem_len("ing"))) {
        w_.erase(w_.size() - 3);
        cleanup = true;
      }
    }
    if (!cleanup) return;
    if (ends_with("at") || ends_with("bl") || ends_with("iz")) {
      w_ += 'e';
    } else if (double_consonant()) {
      char c = w_.back();
      if (c != 'l' && c != 's' && c != 'z') w_.pop_back();
    } else if (measure(w_.size()) == 1 && cvc(w_.size())) {
      w_ += 'e';
    }
  }

  void step1c() {
    if (ends_with("y") && has_vowel(w_.size() - 1)) w_.back() = 'i';
  }

  void step2() {
    static constexpr struct { std::string_view from, to; } rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
        {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
        {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
        {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
        {"iviti", "ive"},   {"biliti", "ble"},  {"logi", "log"},
    };
    for (const auto& r : rules)
      if (replace_if(r.from, r.to, 0)) return;
  }

  void step3() {
    static constexpr struct { std::string_view from, to; } rules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    for (const auto& r : rules)
      if (replace_if(r.from, r.to, 0)) return;
  }

  void step4() {
    static constexpr std::string_view suffixes[] = {
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement",
        "ment", "ent", "ion",  "ou",  "ism", "ate",  "iti",  "ous", "ive",
        "ize",
    };
    for (std::string_view s : suffixes) {
      if (!ends_with(s)) continue;
      std::size_t sl = stem_len(s);
      if (s == "ion" && !(sl > 0 && (w_[sl - 1] == 's' || w_[sl - 1] == 't')))
        return;  // ion only strips after s or t
      if (measure(sl) > 1) w_.erase(sl);
      return;
    }
  }

  void step5a() {
    if (!ends_with("e")) return;
    std::size_t sl = w_.size() - 1;
    int m = measure(sl);
    if (m > 1 || (m == 1 && !cvc(sl))) w_.erase(sl);
  }

  void step5b() {
    if (w_.size() >= 2 && w_.back() == 'l' && double_consonant() &&
        measure(w_.size()) > 1)
      w_.pop_back();
  }
};

}  // namespace

std::string porter_stem(std::string_view word) {
  for (char c : word)
    if (!(c >= 'a' && c <= 'z')) return std::string(word);  // a-z words only
  return Stemmer(word).run();
}

}  // namespace relarec
