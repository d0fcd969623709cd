// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#include "relarec/inverted_index.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "relarec/binio.hpp"
#include "relarec/error.hpp"

namespace relarec {

namespace {

constexpr char kMagic[] = "RIDX";
constexpr std::uint32_t kFormatVersion = 1;

std::string indexed_text(const Document& doc, bool index_keywords) {
  std::string text = doc.title;
  text += '\n';
  text += doc.abstract;
  if (index_keywords)
    for (const auto& k : doc.keywords) {
      text += '\n';
      text += k;
    }
  return text;
}

}  // namespace

InvertedIndex InvertedIndex::build(const CorpusStore& corpus,
                                   const TextPipeline& pipe,
                                   const BuildOptions& options) {
  auto docs = corpus.select(options.corpus_tag);
  if (docs.empty()) throw Error("nothing to index");

  InvertedIndex index;
  for (const Document* doc : docs) {
    auto stems = pipe.stems(indexed_text(*doc, options.index_keywords));
    const auto ord = static_cast<std::uint32_t>(index.doc_ids_.size());
    index.doc_ids_.push_back(doc->doc_id);
    index.doc_ordinals_.emplace(doc->doc_id, ord);
    index.field_lengths_.push_back(static_cast<std::uint32_t>(stems.size()));

    // counts per stem, first-seen order
    std::map<std::string, std::uint32_t> counts;
    for (auto& s : stems) ++counts[s];
    auto& fwd = index.doc_terms_.emplace_back();
    for (auto& [stem, tf] : counts) {
      auto [it, fresh] =
          index.term_ordinals_.try_emplace(stem, index.terms_.size());
      if (fresh) {
        index.terms_.push_back(stem);
        index.postings_.emplace_back();
      }
      const auto term_ord = static_cast<std::uint32_t>(it->second);
      index.postings_[term_ord].push_back({ord, tf});
      fwd.push_back({term_ord, tf});
    }
  }
  return index;
}

bool InvertedIndex::contains_doc(std::string_view doc_id) const {
  return doc_ordinal(doc_id) >= 0;
}

std::int64_t InvertedIndex::doc_ordinal(std::string_view doc_id) const {
  auto it = doc_ordinals_.find(std::string(doc_id));
  return it == doc_ordinals_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

const std::vector<InvertedIndex::Posting>* InvertedIndex::postings_of(
    std::string_view term) const {
  auto it = term_ordinals_.find(std::string(term));
  return it == term_ordinals_.end() ? nullptr : &postings_[it->second];
}

std::uint32_t InvertedIndex::doc_freq(std::string_view term) const {
  const auto* p = postings_of(term);
  return p ? static_cast<std::uint32_t>(p->size()) : 0;
}

std::uint32_t InvertedIndex::term_freq(std::string_view term,
                                       std::string_view doc_id) const {
  const auto* p = postings_of(term);
  const std::int64_t ord = doc_ordinal(doc_id);
  if (!p || ord < 0) return 0;
  for (const auto& post : *p)
    if (post.doc == static_cast<std::uint32_t>(ord)) return post.tf;
  return 0;
}

std::uint32_t InvertedIndex::field_length(std::string_view doc_id) const {
  const std::int64_t ord = doc_ordinal(doc_id);
  if (ord < 0) throw NotFoundError("document not indexed: " + std::string(doc_id));
  return field_lengths_[static_cast<std::size_t>(ord)];
}

double InvertedIndex::idf_squared(std::uint32_t df) const {
  const double idf =
      1.0 + std::log(static_cast<double>(doc_count()) / (df + 1.0));
  return idf * idf;
}

double InvertedIndex::tf_idf(std::string_view term,
                             std::string_view doc_id) const {
  const std::uint32_t tf = term_freq(term, doc_id);
  if (tf == 0) return 0.0;
  return std::sqrt(static_cast<double>(tf)) * idf_squared(doc_freq(term));
}

std::vector<WeightedTerm> InvertedIndex::select_query_terms(
    std::string_view doc_id, const MoreLikeThisParams& params) const {
  const std::int64_t ord = doc_ordinal(doc_id);
  if (ord < 0) throw NotFoundError("document not indexed: " + std::string(doc_id));

  std::vector<WeightedTerm> selected;
  for (const auto& tc : doc_terms_[static_cast<std::size_t>(ord)]) {
    if (tc.tf < params.min_term_freq) continue;
    const auto df = static_cast<std::uint32_t>(postings_[tc.term].size());
    if (df < params.min_doc_freq) continue;
    const double w =
        std::sqrt(static_cast<double>(tc.tf)) * idf_squared(df);
    selected.push_back({terms_[tc.term], w});
  }
  std::sort(selected.begin(), selected.end(), [](const auto& a, const auto& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.term < b.term;
  });
  if (selected.size() > params.max_query_terms)
    selected.resize(params.max_query_terms);
  return selected;
}

std::vector<ScoredDoc> InvertedIndex::recommend(
    std::string_view doc_id, const MoreLikeThisParams& params,
    std::size_t k) const {
  const auto query = select_query_terms(doc_id, params);
  if (query.empty()) return {};
  const auto self = static_cast<std::uint32_t>(doc_ordinal(doc_id));

  std::vector<double> scores(doc_count(), 0.0);
  std::vector<bool> touched(doc_count(), false);
  for (const auto& [term, weight] : query) {
    const auto* posts = postings_of(term);
    const double idf2 = idf_squared(static_cast<std::uint32_t>(posts->size()));
    for (const auto& post : *posts) {
      if (post.doc == self) continue;
      scores[post.doc] += std::sqrt(static_cast<double>(post.tf)) * idf2;
      touched[post.doc] = true;
    }
  }

  std::vector<ScoredDoc> out;
  for (std::uint32_t d = 0; d < doc_count(); ++d) {
    if (!touched[d]) continue;
    out.push_back(
        {doc_ids_[d], scores[d] / std::sqrt(double(field_lengths_[d]))});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

void InvertedIndex::save(const std::string& path) const {
  BinaryWriter out(path);
  out.magic(kMagic, kFormatVersion);
  out.u64(doc_ids_.size());
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    out.str(doc_ids_[d]);
    out.u32(field_lengths_[d]);
  }
  out.u64(terms_.size());
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    out.str(terms_[t]);
    out.u64(postings_[t].size());
    for (const auto& p : postings_[t]) {
      out.u32(p.doc);
      out.u32(p.tf);
    }
  }
  out.close();
}

InvertedIndex InvertedIndex::load(const std::string& path) {
  BinaryReader in(path);
  in.magic(kMagic, kFormatVersion);
  InvertedIndex index;
  const std::uint64_t ndocs = in.u64();
  for (std::uint64_t d = 0; d < ndocs; ++d) {
    std::string id = in.str();
    index.doc_ordinals_.emplace(id, index.doc_ids_.size());
    index.doc_ids_.push_back(std::move(id));
    index.field_lengths_.push_back(in.u32());
  }
  index.doc_terms_.resize(ndocs);
  const std::uint64_t nterms = in.u64();
  for (std::uint64_t t = 0; t < nterms; ++t) {
    std::string term = in.str();
    index.term_ordinals_.emplace(term, index.terms_.size());
    index.terms_.push_back(std::move(term));
    auto& posts = index.postings_.emplace_back();
    const std::uint64_t nposts = in.u64();
    posts.reserve(nposts);
    for (std::uint64_t p = 0; p < nposts; ++p) {
      Posting post;
      post.doc = in.u32();
      post.tf = in.u32();
      if (post.doc >= ndocs) throw IoError("corrupt posting in " + path);
      index.doc_terms_[post.doc].push_back(
          {static_cast<std::uint32_t>(t), post.tf});
      posts.push_back(post);
    }
  }
  return index;
}

}  // namespace relarec
