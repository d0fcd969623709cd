// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "relarec/embedding.hpp"
#include "relarec/experiment.hpp"
#include "relarec/inverted_index.hpp"

namespace relarec {

// Everything the CLI and the HTTP service read from one declarative JSON
// config file. The field defaults below are the shipped behavior when no
// file is given at all.
struct AppConfig {
  std::string data_dir = "data";
  int http_port = 8080;
  bool index_keywords = false;  // fold author keywords into the term index

  ExperimentConfig experiment;
  MoreLikeThisParams mlt;
  EmbeddingHyperparams embedding;
  UserModel user_model;

  void validate() const;  // throws ConfigError
};

// Built-in defaults plus a single scenario named "default" covering the
// whole corpus.
AppConfig default_config();

// Strict JSON parse: an unknown key at any level is a ConfigError naming
// the key, so a typo never silently falls back to a default. Scenarios
// omitted (or empty) fall back to the default scenario. The result is
// validated.
AppConfig parse_config(std::string_view json_text);
AppConfig load_config_file(const std::string& path);  // IoError when unreadable

// Environment overrides, applied on top of file values (command-line flags
// are applied after this and win). RELAREC_DATA_DIR overrides data_dir;
// RELAREC_SEED overrides experiment.rng_seed. RELAREC_CONFIG selects the
// config file itself and is handled by the CLI. `lookup` is injectable for
// tests; the default reads the process environment.
using EnvLookup = std::function<const char*(const char*)>;
void apply_env_overrides(AppConfig& config, const EnvLookup& lookup = {});

// Canonical on-disk layout under data_dir. Per-scenario artifacts are keyed
// by corpus tag; the empty tag (whole corpus) maps to the key "all".
class ArtifactPaths {
 public:
  explicit ArtifactPaths(std::string data_dir);

  static std::string key(std::string_view corpus_tag);

  const std::string& data_dir() const { return data_dir_; }

  std::string corpus() const;
  std::string terms_index(std::string_view corpus_tag) const;
  std::string keyphrase_index(std::string_view corpus_tag) const;
  std::string keyphrase_dump(std::string_view corpus_tag) const;
  std::string embeddings(std::string_view corpus_tag) const;
  std::string deliveries_log() const;
  std::string clicks_log() const;
  std::string engine_state() const;
  std::string report_text() const;
  std::string report_ndjson() const;
  std::string report_bars_svg() const;
  std::string report_curve_svg() const;

 private:
  std::string join(std::string_view name) const;

  std::string data_dir_;
};

}  // namespace relarec
