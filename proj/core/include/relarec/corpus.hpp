// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace relarec {

struct Document {
  std::string doc_id;
  std::string title;
  std::string abstract;
  std::vector<std::string> keywords;
  std::string corpus_tag;

  bool operator==(const Document&) const = default;
};

struct IngestRejection {
  std::size_t line = 0;  // 1-based line in the input
  std::string reason;
};

struct IngestSummary {
  std::size_t accepted = 0;
  std::vector<IngestRejection> rejections;

  std::size_t rejected() const { return rejections.size(); }
};

// Append-only document store. Single writer during ingest; immutable and
// freely shared between reader threads afterwards.
class CorpusStore {
 public:
  // Reads newline-delimited records: one JSON object per line with keys
  // `id`, `title`, `abstract`, `keywords` (optional array), `corpus`.
  // Unknown keys are ignored. Bad records are rejected, never fatal.
  IngestSummary ingest(std::istream& in);
  IngestSummary ingest_file(const std::string& path);

  const Document& get(std::string_view doc_id) const;  // throws NotFoundError
  bool contains(std::string_view doc_id) const;
  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }

  // Insertion order.  An empty tag selects every document.
  const std::vector<Document>& all() const { return docs_; }
  std::vector<const Document*> select(std::string_view corpus_tag) const;

  // One data file plus an id -> byte-offset index beside it (`path` + ".idx").
  void save(const std::string& path) const;
  static CorpusStore open(const std::string& path);

 private:
  bool insert(Document doc);

  std::vector<Document> docs_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

}  // namespace relarec
