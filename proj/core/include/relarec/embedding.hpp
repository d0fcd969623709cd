// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "relarec/corpus.hpp"
#include "relarec/inverted_index.hpp"
#include "relarec/text_pipeline.hpp"

namespace relarec {

struct EmbeddingHyperparams {
  std::uint32_t dim = 100;
  std::uint32_t epochs = 20;
  std::uint32_t negative = 5;   // noise draws per position
  std::uint32_t min_count = 2;  // vocabulary threshold
  double alpha_start = 0.025;   // linear LR decay over all positions
  double alpha_end = 0.0001;
  std::uint32_t threads = 1;    // >1 forfeits bitwise reproducibility
};

// dot(a,b) / (|a||b|); throws "undefined similarity" on a zero vector.
double cosine(const std::vector<double>& a, const std::vector<double>& b);

// Distributed bag-of-words paragraph vectors: each document vector learns
// to predict its own tokens against unigram^0.75 noise.
class EmbeddingModel {
 public:
  static EmbeddingModel train(const CorpusStore& corpus,
                              const TextPipeline& pipe,
                              const EmbeddingHyperparams& params,
                              std::uint64_t seed,
                              std::string_view corpus_tag = {});

  std::size_t doc_count() const { return doc_ids_.size(); }
  std::uint32_t dim() const { return params_.dim; }
  const EmbeddingHyperparams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  std::string_view mode() const { return "pv-dbow"; }
  std::size_t vocab_size() const { return vocab_size_; }

  bool contains_doc(std::string_view doc_id) const;
  const std::vector<double>& vector_of(std::string_view doc_id) const;
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }

  // mean negative-sampling loss per position, one entry per epoch
  const std::vector<double>& loss_curve() const { return loss_curve_; }

  // every other document scored by cosine; descending, doc_id tiebreak
  std::vector<ScoredDoc> recommend(std::string_view doc_id,
                                   std::size_t k) const;

  void save(const std::string& path) const;
  static EmbeddingModel load(const std::string& path);

  // Negative-sampling objective for one position, exposed so the update
  // rule can be checked against finite differences:
  //   L = -ln s(v.p) - sum_i ln s(-v.n_i)
  static double ns_loss(const std::vector<double>& v,
                        const std::vector<double>& pos,
                        const std::vector<std::vector<double>>& negs);
  // gradients of ns_loss wrt v, pos, and each negative vector
  static void ns_grads(const std::vector<double>& v,
                       const std::vector<double>& pos,
                       const std::vector<std::vector<double>>& negs,
                       std::vector<double>* grad_v,
                       std::vector<double>* grad_pos,
                       std::vector<std::vector<double>>* grad_negs);

 private:
  EmbeddingHyperparams params_;
  std::uint64_t seed_ = 0;
  std::size_t vocab_size_ = 0;
  std::vector<std::string> doc_ids_;
  std::unordered_map<std::string, std::size_t> doc_ordinals_;
  std::vector<std::vector<double>> doc_vectors_;
  std::vector<double> loss_curve_;
};

}  // namespace relarec
