// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "relarec/corpus.hpp"
#include "relarec/inverted_index.hpp"
#include "relarec/text_pipeline.hpp"

namespace relarec {

struct FeatureWeights {
  double depth = 0.00;
  double height = 0.00;
  double lifespan = 0.00;
  double frequency = 0.10;
  double noun_value = 0.60;
  double maximality = 0.40;
};

struct Keyphrase {
  std::vector<std::string> stems;  // 1-3 stems
  std::uint8_t n = 0;              // == stems.size()

  double depth = 0.0;
  double height = 0.0;
  double lifespan = 0.0;
  double frequency = 0.0;
  double noun_value = 0.0;
  double maximality = 0.0;
  double score = 0.0;

  // start positions (original token index) of each occurrence, ascending
  std::vector<std::size_t> occurrences;

  std::string joined() const;  // stems joined with single spaces
};

// One of the 7 non-empty subsets of {unigram, bigram, trigram},
// encoded as a bitmask: uni=1, bi=2, tri=4.
class NgramCombo {
 public:
  static constexpr int kCount = 7;

  explicit NgramCombo(unsigned mask);            // throws unless 1..7
  static NgramCombo from_name(std::string_view); // "uni+bi" etc.
  static const std::array<NgramCombo, kCount>& all();

  bool contains(unsigned n) const { return (mask_ >> (n - 1)) & 1u; }
  unsigned mask() const { return mask_; }
  std::string_view name() const;

  bool operator==(const NgramCombo&) const = default;

 private:
  unsigned mask_;
};

struct ExtractorOptions {
  FeatureWeights weights;
  // POS gate: every token's tag must be listed; the final token's tag must
  // additionally be a noun tag.
  std::vector<std::string> allowed_tags = {"JJ", "NN", "NNS", "NNP", "NNPS"};
  std::size_t max_skipped_stopwords = 1;  // per candidate window
  std::size_t max_selected = 19;
};

// Keyphrase pipeline: window candidates over the tagged,
// stopword-stripped token stream, six statistical features, weighted score,
// top-N selection.
class KeyphraseExtractor {
 public:
  KeyphraseExtractor() = default;
  explicit KeyphraseExtractor(ExtractorOptions options);

  const ExtractorOptions& options() const { return options_; }

  // All scored candidates (selection cutoff not applied), unordered.
  // `tokens` is the post-pipeline stream; doc_len the pre-removal count.
  std::vector<Keyphrase> score_candidates(const std::vector<Token>& tokens,
                                          std::size_t doc_len) const;

  // Rank by score descending (ties: larger n, then lexicographic joined
  // stems) and keep at most max_selected.
  std::vector<Keyphrase> select_top(std::vector<Keyphrase> scored) const;

  // Full pipeline over a document's title+abstract.
  std::vector<Keyphrase> extract(const Document& doc,
                                 const TextPipeline& pipe) const;

 private:
  ExtractorOptions options_;
};

// One newline-delimited record per keyphrase: doc_id, rank (1-based), stems,
// n, the six features, score.
void dump_keyphrases(std::ostream& out, std::string_view doc_id,
                     const std::vector<Keyphrase>& selected);

// Seven independent whole-keyphrase search fields, one per NgramCombo.
// A document's selected keyphrases of gram size n are posted to every field
// whose combo contains n; term frequency is the occurrence count.
class KeyphraseIndex {
 public:
  static KeyphraseIndex build(const CorpusStore& corpus,
                              const TextPipeline& pipe,
                              const KeyphraseExtractor& extractor,
                              std::string_view corpus_tag = {});

  std::size_t doc_count() const { return doc_ids_.size(); }
  bool contains_doc(std::string_view doc_id) const;

  // Docs with at least one keyphrase of a size in `combo`.
  std::size_t field_doc_count(NgramCombo combo) const;
  std::uint32_t field_doc_freq(NgramCombo combo, std::string_view term) const;

  // The query document's selected keyphrases restricted to `combo` sizes,
  // best `count` of them (entire list when count is empty = "all").
  // Candidates scored with the term formula over whole-keyphrase terms.
  std::vector<ScoredDoc> recommend(std::string_view doc_id, NgramCombo combo,
                                   std::optional<std::uint32_t> count,
                                   std::size_t k) const;

  // Selected keyphrases of a doc, rank order: (joined stems, n, tf, score).
  struct Entry {
    std::string term;
    std::uint8_t n = 0;
    std::uint32_t tf = 0;
    double score = 0.0;

    bool operator==(const Entry&) const = default;
  };
  const std::vector<Entry>& entries(std::string_view doc_id) const;

  void save(const std::string& path) const;
  static KeyphraseIndex load(const std::string& path);

 private:
  struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t tf = 0;
  };
  struct Field {
    std::unordered_map<std::string, std::vector<Posting>> postings;
    std::vector<std::uint32_t> field_lengths;  // by doc ordinal; 0 = absent
    std::size_t doc_count = 0;
  };

  void index_doc(std::uint32_t ord);  // posts doc entries into all 7 fields
  std::int64_t doc_ordinal(std::string_view doc_id) const;

  std::vector<std::string> doc_ids_;
  std::unordered_map<std::string, std::size_t> doc_ordinals_;
  std::vector<std::vector<Entry>> docs_;       // by ordinal, rank order
  std::array<Field, NgramCombo::kCount> fields_;  // by mask-1
};

}  // namespace relarec
