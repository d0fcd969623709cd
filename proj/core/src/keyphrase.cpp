// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#include "relarec/keyphrase.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "relarec/binio.hpp"
#include "relarec/error.hpp"

namespace relarec {

namespace {

constexpr char kMagic[] = "RKPX";
constexpr std::uint32_t kFormatVersion = 1;

// mask 1..7 -> display name
constexpr std::string_view kComboNames[] = {
    "uni", "bi", "uni+bi", "tri", "uni+tri", "bi+tri", "uni+bi+tri"};

}  // namespace

std::string Keyphrase::joined() const {
  std::string out;
  for (const auto& s : stems) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

NgramCombo::NgramCombo(unsigned mask) : mask_(mask) {
  if (mask < 1 || mask > 7)
    throw Error("invalid n-gram combination mask: " + std::to_string(mask));
}

std::string_view NgramCombo::name() const { return kComboNames[mask_ - 1]; }

NgramCombo NgramCombo::from_name(std::string_view name) {
  for (unsigned m = 1; m <= 7; ++m)
    if (kComboNames[m - 1] == name) return NgramCombo(m);
  throw Error("unknown n-gram combination: " + std::string(name));
}

const std::array<NgramCombo, NgramCombo::kCount>& NgramCombo::all() {
  static const std::array<NgramCombo, kCount> combos = {
      NgramCombo(1), NgramCombo(2), NgramCombo(3), NgramCombo(4),
      NgramCombo(5), NgramCombo(6), NgramCombo(7)};
  return combos;
}

KeyphraseExtractor::KeyphraseExtractor(ExtractorOptions options)
    : options_(std::move(options)) {}

std::vector<Keyphrase> KeyphraseExtractor::score_candidates(
    const std::vector<Token>& tokens, std::size_t doc_len) const {
  struct Candidate {
    Keyphrase kp;
    std::vector<std::size_t> survivor_starts;
    std::uint32_t noun_count = 0;  // from the first occurrence
  };
  std::vector<Candidate> candidates;
  std::unordered_map<std::string, std::size_t> by_key;

  auto tag_allowed = [&](const std::string& tag) {
    return std::find(options_.allowed_tags.begin(), options_.allowed_tags.end(),
                     tag) != options_.allowed_tags.end();
  };

  const std::size_t count = tokens.size();
  // occurrence starts (survivor index) of 2- and 3-token candidates,
  // for the maximality coverage test
  std::vector<char> bigram_at(count, 0), trigram_at(count, 0);

  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t n = 1; n <= 3 && i + n <= count; ++n) {
      const Token& first = tokens[i];
      const Token& last = tokens[i + n - 1];
      // windows may skip a limited number of removed-stopword positions
      const std::size_t skipped = last.position - first.position - (n - 1);
      if (skipped > options_.max_skipped_stopwords) break;
      bool ok = true;
      for (std::size_t j = 0; j < n; ++j)
        if (!tag_allowed(tokens[i + j].pos)) {
          ok = false;
          break;
        }
      if (!ok || !is_noun_tag(last.pos)) continue;

      std::string key;
      for (std::size_t j = 0; j < n; ++j) {
        if (j) key += ' ';
        key += tokens[i + j].stem;
      }
      auto [it, fresh] = by_key.try_emplace(key, candidates.size());
      if (fresh) {
        Candidate c;
        for (std::size_t j = 0; j < n; ++j) {
          c.kp.stems.push_back(tokens[i + j].stem);
          if (is_noun_tag(tokens[i + j].pos)) ++c.noun_count;
        }
        c.kp.n = static_cast<std::uint8_t>(n);
        candidates.push_back(std::move(c));
      }
      auto& c = candidates[it->second];
      c.kp.occurrences.push_back(first.position);
      c.survivor_starts.push_back(i);
      if (n == 2) bigram_at[i] = 1;
      if (n == 3) trigram_at[i] = 1;
    }
  }
  if (candidates.empty()) return {};

  std::size_t max_count = 0;
  for (const auto& c : candidates)
    max_count = std::max(max_count, c.kp.occurrences.size());

  auto marked = [](const std::vector<char>& at, std::size_t idx, long lo,
                   long hi) {
    for (long s = lo; s <= hi; ++s) {
      long pos = static_cast<long>(idx) + s;
      if (pos >= 0 && pos < static_cast<long>(at.size()) && at[pos]) return true;
    }
    return false;
  };

  std::vector<Keyphrase> out;
  out.reserve(candidates.size());
  const FeatureWeights& w = options_.weights;
  for (auto& c : candidates) {
    Keyphrase kp = std::move(c.kp);
    const double len = static_cast<double>(doc_len);
    const double first = static_cast<double>(kp.occurrences.front());
    const double last = static_cast<double>(kp.occurrences.back());
    kp.depth = 1.0 - first / len;
    kp.height = 1.0 - last / len;
    kp.lifespan = (last - first) / len;
    kp.frequency = static_cast<double>(kp.occurrences.size()) /
                   static_cast<double>(max_count);
    kp.noun_value = static_cast<double>(c.noun_count) / kp.n;

    std::size_t covered = 0;
    for (std::size_t s : c.survivor_starts) {
      bool cov = false;
      if (kp.n == 1)
        cov = marked(bigram_at, s, -1, 0) || marked(trigram_at, s, -2, 0);
      else if (kp.n == 2)
        cov = marked(trigram_at, s, -1, 0);
      if (cov) ++covered;
    }
    kp.maximality = 1.0 - static_cast<double>(covered) /
                              static_cast<double>(kp.occurrences.size());

    kp.score = w.depth * kp.depth + w.height * kp.height +
               w.lifespan * kp.lifespan + w.frequency * kp.frequency +
               w.noun_value * kp.noun_value + w.maximality * kp.maximality;
    out.push_back(std::move(kp));
  }
  return out;
}

std::vector<Keyphrase> KeyphraseExtractor::select_top(
    std::vector<Keyphrase> scored) const {
  std::sort(scored.begin(), scored.end(),
            [](const Keyphrase& a, const Keyphrase& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.n != b.n) return a.n > b.n;
              return a.joined() < b.joined();
            });
  if (scored.size() > options_.max_selected)
    scored.resize(options_.max_selected);
  return scored;
}

std::vector<Keyphrase> KeyphraseExtractor::extract(
    const Document& doc, const TextPipeline& pipe) const {
  std::string text = doc.title;
  text += '\n';
  text += doc.abstract;
  std::size_t doc_len = 0;
  auto tokens = pipe.run(text, &doc_len);
  return select_top(score_candidates(tokens, doc_len));
}

void dump_keyphrases(std::ostream& out, std::string_view doc_id,
                     const std::vector<Keyphrase>& selected) {
  auto esc = [](std::string_view s) {
    std::string e;
    for (char ch : s) {
      if (ch == '"' || ch == '\\') e += '\\';
      e += ch;
    }
    return e;
  };
  int rank = 0;
  for (const auto& kp : selected) {
    out << "{\"doc_id\":\"" << esc(doc_id) << "\",\"rank\":" << ++rank
        << ",\"stems\":[";
    for (std::size_t i = 0; i < kp.stems.size(); ++i) {
      if (i) out << ',';
      out << '"' << esc(kp.stems[i]) << '"';
    }
    out << "],\"n\":" << int(kp.n) << ",\"depth\":" << kp.depth
        << ",\"height\":" << kp.height << ",\"lifespan\":" << kp.lifespan
        << ",\"frequency\":" << kp.frequency
        << ",\"noun_value\":" << kp.noun_value
        << ",\"maximality\":" << kp.maximality << ",\"score\":" << kp.score
        << "}\n";
  }
}

KeyphraseIndex KeyphraseIndex::build(const CorpusStore& corpus,
                                     const TextPipeline& pipe,
                                     const KeyphraseExtractor& extractor,
                                     std::string_view corpus_tag) {
  auto docs = corpus.select(corpus_tag);
  if (docs.empty()) throw Error("nothing to index");

  KeyphraseIndex index;
  for (const Document* doc : docs) {
    auto selected = extractor.extract(*doc, pipe);
    const auto ord = static_cast<std::uint32_t>(index.doc_ids_.size());
    index.doc_ordinals_.emplace(doc->doc_id, ord);
    index.doc_ids_.push_back(doc->doc_id);
    auto& entries = index.docs_.emplace_back();
    for (const auto& kp : selected)
      entries.push_back({kp.joined(), kp.n,
                         static_cast<std::uint32_t>(kp.occurrences.size()),
                         kp.score});
    index.index_doc(ord);
  }
  return index;
}

void KeyphraseIndex::index_doc(std::uint32_t ord) {
  for (const NgramCombo& combo : NgramCombo::all()) {
    Field& field = fields_[combo.mask() - 1];
    field.field_lengths.resize(doc_ids_.size(), 0);
    std::uint32_t length = 0;
    for (const Entry& e : docs_[ord]) {
      if (!combo.contains(e.n)) continue;
      field.postings[e.term].push_back({ord, e.tf});
      length += e.tf;
    }
    field.field_lengths[ord] = length;
    if (length > 0) ++field.doc_count;
  }
}

std::int64_t KeyphraseIndex::doc_ordinal(std::string_view doc_id) const {
  auto it = doc_ordinals_.find(std::string(doc_id));
  return it == doc_ordinals_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

bool KeyphraseIndex::contains_doc(std::string_view doc_id) const {
  return doc_ordinal(doc_id) >= 0;
}

std::size_t KeyphraseIndex::field_doc_count(NgramCombo combo) const {
  return fields_[combo.mask() - 1].doc_count;
}

std::uint32_t KeyphraseIndex::field_doc_freq(NgramCombo combo,
                                             std::string_view term) const {
  const Field& field = fields_[combo.mask() - 1];
  auto it = field.postings.find(std::string(term));
  return it == field.postings.end()
             ? 0
             : static_cast<std::uint32_t>(it->second.size());
}

const std::vector<KeyphraseIndex::Entry>& KeyphraseIndex::entries(
    std::string_view doc_id) const {
  const std::int64_t ord = doc_ordinal(doc_id);
  if (ord < 0)
    throw NotFoundError("document not indexed: " + std::string(doc_id));
  return docs_[static_cast<std::size_t>(ord)];
}

std::vector<ScoredDoc> KeyphraseIndex::recommend(
    std::string_view doc_id, NgramCombo combo,
    std::optional<std::uint32_t> count, std::size_t k) const {
  if (count && (*count < 1 || *count > 19))
    throw Error("keyphrase count out of range: " + std::to_string(*count));
  const std::int64_t self = doc_ordinal(doc_id);
  if (self < 0)
    throw NotFoundError("document not indexed: " + std::string(doc_id));

  // best `count` keyphrases of the requested sizes, in rank order
  std::vector<const Entry*> query;
  for (const Entry& e : docs_[static_cast<std::size_t>(self)]) {
    if (!combo.contains(e.n)) continue;
    query.push_back(&e);
    if (count && query.size() == *count) break;
  }
  if (query.empty()) return {};

  const Field& field = fields_[combo.mask() - 1];
  std::vector<double> scores(doc_ids_.size(), 0.0);
  std::vector<char> touched(doc_ids_.size(), 0);
  for (const Entry* e : query) {
    const auto& posts = field.postings.at(e->term);
    const double idf =
        1.0 + std::log(static_cast<double>(field.doc_count) /
                       (static_cast<double>(posts.size()) + 1.0));
    const double idf2 = idf * idf;
    for (const auto& p : posts) {
      if (p.doc == static_cast<std::uint32_t>(self)) continue;
      scores[p.doc] += std::sqrt(static_cast<double>(p.tf)) * idf2;
      touched[p.doc] = 1;
    }
  }

  std::vector<ScoredDoc> out;
  for (std::uint32_t d = 0; d < doc_ids_.size(); ++d) {
    if (!touched[d]) continue;
    out.push_back({doc_ids_[d],
                   scores[d] / std::sqrt(double(field.field_lengths[d]))});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

void KeyphraseIndex::save(const std::string& path) const {
  BinaryWriter out(path);
  out.magic(kMagic, kFormatVersion);
  out.u64(doc_ids_.size());
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    out.str(doc_ids_[d]);
    out.u32(static_cast<std::uint32_t>(docs_[d].size()));
    for (const Entry& e : docs_[d]) {
      out.str(e.term);
      out.u8(e.n);
      out.u32(e.tf);
      out.f64(e.score);
    }
  }
  out.close();
}

KeyphraseIndex KeyphraseIndex::load(const std::string& path) {
  BinaryReader in(path);
  in.magic(kMagic, kFormatVersion);
  KeyphraseIndex index;
  const std::uint64_t ndocs = in.u64();
  for (std::uint64_t d = 0; d < ndocs; ++d) {
    std::string id = in.str();
    const auto ord = static_cast<std::uint32_t>(index.doc_ids_.size());
    index.doc_ordinals_.emplace(id, ord);
    index.doc_ids_.push_back(std::move(id));
    auto& entries = index.docs_.emplace_back();
    const std::uint32_t n = in.u32();
    entries.reserve(n);
    for (std::uint32_t e = 0; e < n; ++e) {
      Entry entry;
      entry.term = in.str();
      entry.n = in.u8();
      entry.tf = in.u32();
      entry.score = in.f64();
      if (entry.n < 1 || entry.n > 3)
        throw IoError("corrupt keyphrase entry in " + path);
      entries.push_back(std::move(entry));
    }
    index.index_doc(ord);
  }
  return index;
}

}  // namespace relarec
