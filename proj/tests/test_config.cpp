// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <string>

#include "relarec/config.hpp"
#include "relarec/error.hpp"

using namespace relarec;

namespace {

// Environment stand-in so the override tests never touch the real process
// environment.
EnvLookup env_of(std::map<std::string, std::string> values) {
  return [values = std::move(values)](const char* name) -> const char* {
    auto it = values.find(name);
    return it == values.end() ? nullptr : it->second.c_str();
  };
}

}  // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("defaults are valid and carry one catch-all scenario") {
  AppConfig config = default_config();
  CHECK_NOTHROW(config.validate());
  CHECK(config.data_dir == "data");
  CHECK(config.http_port == 8080);
  CHECK_FALSE(config.index_keywords);
  REQUIRE(config.experiment.scenarios.size() == 1);
  CHECK(config.experiment.scenarios[0].name == "default");
  CHECK(config.experiment.scenarios[0].corpus_tag.empty());
  CHECK(config.experiment.scenarios[0].max_items == 6);
  CHECK(config.experiment.arm_weights.terms == 0.95);
  CHECK(config.experiment.arm_weights.keyphrases == 0.03);
  CHECK(config.experiment.arm_weights.embeddings == 0.02);
  CHECK(config.mlt.min_term_freq == 2);
  CHECK(config.mlt.min_doc_freq == 5);
  CHECK(config.mlt.max_query_terms == 25);
  CHECK(config.embedding.dim == 100);
  CHECK(config.embedding.epochs == 20);
  CHECK(config.user_model.position_bias == 0.6);
}

TEST_CASE("a full document round-trips every key") {
  const char* text = R"({
    "data_dir": "/srv/relarec",
    "http_port": 9001,
    "index_keywords": true,
    "rng_seed": 77,
    "arm_weights": {"terms": 0.5, "keyphrases": 0.3, "embeddings": 0.2},
    "scenarios": [
      {"name": "desktop", "corpus": "d", "max_items": 5},
      {"name": "portal", "corpus": "p"}
    ],
    "keyphrase_arm": {"random_count_probability": 0.25, "min_count": 2, "max_count": 10},
    "more_like_this": {"min_term_freq": 1, "min_doc_freq": 1, "max_query_terms": 10},
    "embedding": {"dim": 32, "epochs": 5, "negative": 3, "min_count": 1,
                  "alpha_start": 0.05, "alpha_end": 0.001, "threads": 2},
    "user_model": {
      "position_bias": 0.5,
      "deliveries_per_day": 500,
      "default_rates": {"terms": 0.002, "keyphrases": 0.004, "embeddings": 0.003},
      "scenario_rates": {"portal": {"terms": 0.01}}
    }
  })";
  AppConfig config = parse_config(text);
  CHECK(config.data_dir == "/srv/relarec");
  CHECK(config.http_port == 9001);
  CHECK(config.index_keywords);
  CHECK(config.experiment.rng_seed == 77);
  CHECK(config.experiment.arm_weights.keyphrases == 0.3);
  REQUIRE(config.experiment.scenarios.size() == 2);
  CHECK(config.experiment.scenarios[0].name == "desktop");
  CHECK(config.experiment.scenarios[0].corpus_tag == "d");
  CHECK(config.experiment.scenarios[0].max_items == 5);
  CHECK(config.experiment.scenarios[1].max_items == 6);  // default
  CHECK(config.experiment.keyphrase.random_count_probability == 0.25);
  CHECK(config.experiment.keyphrase.min_count == 2);
  CHECK(config.experiment.keyphrase.max_count == 10);
  CHECK(config.mlt.max_query_terms == 10);
  CHECK(config.embedding.dim == 32);
  CHECK(config.embedding.threads == 2);
  CHECK(config.user_model.position_bias == 0.5);
  CHECK(config.user_model.deliveries_per_day == 500);
  CHECK(config.user_model.default_rates.keyphrases == 0.004);
  REQUIRE(config.user_model.scenario_rates.count("portal") == 1);
  CHECK(config.user_model.scenario_rates.at("portal").terms == 0.01);
  CHECK(config.user_model.scenario_rates.at("portal").embeddings == 0.0);
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"data_dirr": "x"})"),
                       "unknown config key: data_dirr", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"embedding": {"dims": 10}})"),
                       "unknown config key: embedding.dims", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"scenarios": [{"name": "a", "tag": "t"}]})"),
      "unknown config key: scenarios[0].tag", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"user_model": {"default_rates": {"term": 1}}})"),
      "unknown config key: user_model.default_rates.term", ConfigError);
}

TEST_CASE("type and value errors are rejected") {
  CHECK_THROWS_AS(parse_config("not json at all"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"http_port": "8080"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"http_port": 8080.5})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"http_port": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"http_port": 70000})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"rng_seed": -3})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"data_dir": ""})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scenarios": [{"corpus": "x"}]})"),
                  ConfigError);  // scenario without a name
  CHECK_THROWS_AS(parse_config(R"({"scenarios": "default"})"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"arm_weights": {"terms": 0.9, "keyphrases": 0.2,
                                       "embeddings": 0.2}})"),
      ConfigError);  // weights must sum to 1
  CHECK_THROWS_AS(
      parse_config(R"({"user_model": {"position_bias": 0.0}})"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"user_model": {"position_bias": 1.5}})"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"user_model": {"default_rates": {"terms": 1.5}}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"embedding": {"dim": 0}})"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(
          R"({"embedding": {"alpha_start": 0.001, "alpha_end": 0.01}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"keyphrase_arm": {"min_count": 5, "max_count": 2}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(
          R"({"user_model": {"scenario_rates": {"ghost": {"terms": 0.1}}}})"),
      ConfigError);  // rates for a scenario that does not exist
}

TEST_CASE("an empty scenario list falls back to the default scenario") {
  AppConfig config = parse_config(R"({"scenarios": []})");
  REQUIRE(config.experiment.scenarios.size() == 1);
  CHECK(config.experiment.scenarios[0].name == "default");
}

TEST_CASE("environment values override file values") {
  AppConfig config = default_config();
  config.data_dir = "from_file";
  config.experiment.rng_seed = 1;

  apply_env_overrides(config, env_of({{"RELAREC_DATA_DIR", "/tmp/envdir"},
                                      {"RELAREC_SEED", "42"}}));
  CHECK(config.data_dir == "/tmp/envdir");
  CHECK(config.experiment.rng_seed == 42);

  // Unset variables leave the config untouched.
  apply_env_overrides(config, env_of({}));
  CHECK(config.data_dir == "/tmp/envdir");
  CHECK(config.experiment.rng_seed == 42);

  CHECK_THROWS_WITH_AS(
      apply_env_overrides(config, env_of({{"RELAREC_SEED", "7up"}})),
      "RELAREC_SEED must be an unsigned integer", ConfigError);
  CHECK_THROWS_AS(
      apply_env_overrides(config, env_of({{"RELAREC_DATA_DIR", ""}})),
      ConfigError);  // empty data_dir fails validation
}

TEST_CASE("config files load from disk") {
  const std::string path = "config_roundtrip.json";
  {
    std::ofstream out(path);
    out << R"({"http_port": 9999})";
  }
  AppConfig config = load_config_file(path);
  CHECK(config.http_port == 9999);
  std::remove(path.c_str());

  CHECK_THROWS_WITH_AS(load_config_file("no_such_config.json"),
                       "cannot read config file: no_such_config.json",
                       IoError);
}

TEST_CASE("artifact paths follow the documented layout") {
  ArtifactPaths paths("data");
  CHECK(ArtifactPaths::key("") == "all");
  CHECK(ArtifactPaths::key("web") == "web");
  CHECK(paths.corpus() == "data/corpus.bin");
  CHECK(paths.terms_index("") == "data/terms-all.idx");
  CHECK(paths.terms_index("web") == "data/terms-web.idx");
  CHECK(paths.keyphrase_index("") == "data/keyphrases-all.idx");
  CHECK(paths.keyphrase_dump("web") == "data/keyphrases-web.ndjson");
  CHECK(paths.embeddings("") == "data/embeddings-all.bin");
  CHECK(paths.deliveries_log() == "data/deliveries.log");
  CHECK(paths.clicks_log() == "data/clicks.log");
  CHECK(paths.engine_state() == "data/engine_state.json");
  CHECK(paths.report_text() == "data/report.txt");
  CHECK(paths.report_ndjson() == "data/report.ndjson");
  CHECK(paths.report_bars_svg() == "data/report_bars.svg");
  CHECK(paths.report_curve_svg() == "data/report_curve.svg");

  ArtifactPaths slashed("data///");
  CHECK(slashed.corpus() == "data/corpus.bin");
}

TEST_SUITE_END();
