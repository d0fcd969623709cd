// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "relarec/corpus.hpp"
#include "relarec/text_pipeline.hpp"

namespace relarec {

struct MoreLikeThisParams {
  std::uint32_t min_term_freq = 2;
  std::uint32_t min_doc_freq = 5;
  std::uint32_t max_query_terms = 25;
};

struct ScoredDoc {
  std::string doc_id;
  double score = 0.0;

  bool operator==(const ScoredDoc&) const = default;
};

struct WeightedTerm {
  std::string term;
  double weight = 0.0;
};

// TF-IDF index over stemmed title+abstract text. Immutable once built;
// safe for unlimited concurrent readers.
class InvertedIndex {
 public:
  struct BuildOptions {
    std::string corpus_tag;          // empty = whole store
    bool index_keywords = false;     // fold author keywords into the field
  };

  static InvertedIndex build(const CorpusStore& corpus,
                             const TextPipeline& pipe,
                             const BuildOptions& options);
  static InvertedIndex build(const CorpusStore& corpus,
                             const TextPipeline& pipe) {
    return build(corpus, pipe, BuildOptions());
  }

  std::size_t doc_count() const { return doc_ids_.size(); }
  bool contains_doc(std::string_view doc_id) const;
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }

  std::uint32_t doc_freq(std::string_view term) const;
  std::uint32_t term_freq(std::string_view term, std::string_view doc_id) const;
  // Post-pipeline stem count of the indexed field.
  std::uint32_t field_length(std::string_view doc_id) const;

  // sqrt(tf) * (1 + ln(doc_count / (doc_freq + 1)))^2; 0 when absent.
  double tf_idf(std::string_view term, std::string_view doc_id) const;

  // Document stems passing both frequency thresholds, ranked by their
  // tf_idf in the querying document (descending, then lexicographic),
  // truncated to max_query_terms.
  std::vector<WeightedTerm> select_query_terms(
      std::string_view doc_id, const MoreLikeThisParams& params) const;

  // Candidates scored by sum of per-query-term tf_idf in the candidate,
  // normalized by 1/sqrt(candidate field_length); querying document
  // excluded; descending score, then doc_id ascending.
  std::vector<ScoredDoc> recommend(std::string_view doc_id,
                                   const MoreLikeThisParams& params,
                                   std::size_t k) const;

  void save(const std::string& path) const;
  static InvertedIndex load(const std::string& path);

 private:
  struct Posting {
    std::uint32_t doc = 0;  // ordinal into doc_ids_
    std::uint32_t tf = 0;
  };

  double idf_squared(std::uint32_t df) const;
  const std::vector<Posting>* postings_of(std::string_view term) const;
  std::int64_t doc_ordinal(std::string_view doc_id) const;

  std::vector<std::string> doc_ids_;
  std::vector<std::uint32_t> field_lengths_;
  std::unordered_map<std::string, std::size_t> doc_ordinals_;

  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> term_ordinals_;
  std::vector<std::vector<Posting>> postings_;  // by term ordinal

  // forward index: per doc, (term ordinal, tf) pairs for query-term selection
  struct TermCount {
    std::uint32_t term = 0;  // ordinal into terms_
    std::uint32_t tf = 0;
  };
  std::vector<std::vector<TermCount>> doc_terms_;
};

}  // namespace relarec
