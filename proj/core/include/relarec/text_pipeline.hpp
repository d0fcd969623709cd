// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace relarec {

// One word of a document as it moves through the normalization pipeline
// (tokenize -> POS-tag -> stopword removal -> stem). `position` is the
// 0-based index in the tokenized sequence and survives stopword removal, so
// gaps in positions mark removed words.
struct Token {
  std::string surface;  // lowercase, no whitespace
  std::string pos;      // Penn Treebank tag, empty until tagged
  std::string stem;     // empty until stemmed
  std::size_t position = 0;

  bool operator==(const Token&) const = default;
};

// Splits free text into lowercase word tokens. Any codepoint that is not a
// letter acts as a separator, so hyphens, digits and punctuation never end up
// inside a token. Input is UTF-8; malformed bytes separate like punctuation.
std::vector<Token> tokenize(std::string_view text);

// Porter stem of a lowercase word. Total and idempotent-in-practice; the
// result is never longer than the input.
std::string porter_stem(std::string_view word);

// Deterministic POS tagger: embedded lexicon of frequent words, then suffix
// rules, then NN. Covers what keyphrase candidate patterns need (noun and
// adjective tags); it is not a statistical tagger.
class PosTagger {
 public:
  std::string tag_word(const std::string& lowercase_surface) const;

  // Assigns `pos` to every token in place.
  void tag(std::vector<Token>& tokens) const;
};

bool is_noun_tag(std::string_view pos);

// Stopword set. The default is the classic 33-word English analyzer list;
// alternate lists load from a one-word-per-line UTF-8 file ('#' comments and
// blank lines allowed).
class StopwordSet {
 public:
  StopwordSet();  // default list
  static StopwordSet from_file(const std::string& path);
  static StopwordSet from_words(const std::vector<std::string>& words);

  bool contains(const std::string& lowercase_surface) const {
    return words_.count(lowercase_surface) > 0;
  }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

// The full pipeline shared by all recommenders. Stages run in the fixed
// order tokenize -> POS -> stopwords -> stem. Pure; safe to share across
// threads once constructed.
class TextPipeline {
 public:
  TextPipeline() = default;
  explicit TextPipeline(StopwordSet stopwords) : stopwords_(std::move(stopwords)) {}

  // Tokens that survive stopword removal, with pos and stem filled in and
  // original positions preserved.
  std::vector<Token> run(std::string_view text) const;

  // Same, but also reports the pre-removal token count (needed by keyphrase
  // feature scoring, whose positions are relative to the full sequence).
  std::vector<Token> run(std::string_view text, std::size_t* total_tokens) const;

  // Post-pipeline stems only, in order. What the term index and the
  // embedding trainer consume.
  std::vector<std::string> stems(std::string_view text) const;

  const StopwordSet& stopwords() const { return stopwords_; }
  const PosTagger& tagger() const { return tagger_; }

 private:
  StopwordSet stopwords_;
  PosTagger tagger_;
};

}  // namespace relarec
