// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#include "relarec/corpus.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "relarec/binio.hpp"
#include "relarec/error.hpp"

namespace relarec {

namespace {

using nlohmann::json;

constexpr char kDataMagic[] = "RCDT";
constexpr char kIndexMagic[] = "RCIX";
constexpr std::uint32_t kFormatVersion = 1;

// Pulls one record out of a parsed line; returns a reject reason or empty.
std::string record_to_document(const json& j, Document* out) {
  if (!j.is_object()) return "record is not an object";
  auto str_field = [&](const char* key, std::string* dst) -> bool {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return false;
    *dst = it->get<std::string>();
    return true;
  };
  Document doc;
  if (!str_field("id", &doc.doc_id) || doc.doc_id.empty())
    return "missing id";
  if (!str_field("title", &doc.title) || doc.title.empty())
    return "missing title";
  if (!str_field("corpus", &doc.corpus_tag) || doc.corpus_tag.empty())
    return "missing corpus";
  str_field("abstract", &doc.abstract);  // absent or empty is fine
  if (auto it = j.find("keywords"); it != j.end()) {
    if (!it->is_array()) return "keywords is not an array";
    for (const auto& k : *it) {
      if (!k.is_string()) return "keywords is not an array of strings";
      doc.keywords.push_back(k.get<std::string>());
    }
  }
  *out = std::move(doc);
  return {};
}

}  // namespace

IngestSummary CorpusStore::ingest(std::istream& in) {
  IngestSummary summary;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
      summary.rejections.push_back({lineno, "malformed JSON"});
      continue;
    }
    Document doc;
    if (std::string reason = record_to_document(j, &doc); !reason.empty()) {
      summary.rejections.push_back({lineno, std::move(reason)});
      continue;
    }
    if (!insert(std::move(doc))) {
      summary.rejections.push_back({lineno, "duplicate"});
      continue;
    }
    ++summary.accepted;
  }
  return summary;
}

IngestSummary CorpusStore::ingest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open ingest file: " + path);
  return ingest(in);
}

bool CorpusStore::insert(Document doc) {
  auto [it, fresh] = by_id_.try_emplace(doc.doc_id, docs_.size());
  if (!fresh) return false;
  docs_.push_back(std::move(doc));
  return true;
}

const Document& CorpusStore::get(std::string_view doc_id) const {
  auto it = by_id_.find(std::string(doc_id));
  if (it == by_id_.end())
    throw NotFoundError("document not found: " + std::string(doc_id));
  return docs_[it->second];
}

bool CorpusStore::contains(std::string_view doc_id) const {
  return by_id_.count(std::string(doc_id)) != 0;
}

std::vector<const Document*> CorpusStore::select(
    std::string_view corpus_tag) const {
  std::vector<const Document*> out;
  for (const auto& d : docs_)
    if (corpus_tag.empty() || d.corpus_tag == corpus_tag) out.push_back(&d);
  return out;
}

void CorpusStore::save(const std::string& path) const {
  std::vector<std::uint64_t> offsets;
  offsets.reserve(docs_.size());
  {
    BinaryWriter data(path);
    data.magic(kDataMagic, kFormatVersion);
    data.u64(docs_.size());
    for (const auto& d : docs_) {
      offsets.push_back(data.tell());
      data.str(d.doc_id);
      data.str(d.title);
      data.str(d.abstract);
      data.u32(static_cast<std::uint32_t>(d.keywords.size()));
      for (const auto& k : d.keywords) data.str(k);
      data.str(d.corpus_tag);
    }
  }
  BinaryWriter index(path + ".idx");
  index.magic(kIndexMagic, kFormatVersion);
  index.u64(docs_.size());
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    index.str(docs_[i].doc_id);
    index.u64(offsets[i]);
  }
}

CorpusStore CorpusStore::open(const std::string& path) {
  BinaryReader index(path + ".idx");
  index.magic(kIndexMagic, kFormatVersion);
  const std::uint64_t count = index.u64();
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  entries.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string id = index.str();
    std::uint64_t off = index.u64();
    entries.emplace_back(std::move(id), off);
  }

  BinaryReader data(path);
  data.magic(kDataMagic, kFormatVersion);
  if (data.u64() != count)
    throw IoError("corpus data/index count mismatch: " + path);
  CorpusStore store;
  for (const auto& [id, off] : entries) {
    data.seek(off);
    Document doc;
    doc.doc_id = data.str();
    doc.title = data.str();
    doc.abstract = data.str();
    const std::uint32_t nk = data.u32();
    doc.keywords.reserve(nk);
    for (std::uint32_t k = 0; k < nk; ++k) doc.keywords.push_back(data.str());
    doc.corpus_tag = data.str();
    if (doc.doc_id != id)
      throw IoError("corpus index entry does not match data record: " + id);
    if (!store.insert(std::move(doc)))
      throw IoError("corpus data file contains duplicate id: " + id);
  }
  return store;
}

}  // namespace relarec
