// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#include "relarec/config.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <type_traits>

#include <json.hpp>

#include "relarec/error.hpp"

namespace relarec {

namespace {

using nlohmann::json;

std::string key_path(std::string_view where, std::string_view key) {
  if (where.empty()) return std::string(key);
  return std::string(where) + "." + std::string(key);
}

// Strictness: every object must consist solely of keys we know about.
void check_keys(const json& obj, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (std::string_view key : allowed)
      if (it.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError("unknown config key: " + key_path(where, it.key()));
  }
}

const json* child(const json& obj, std::string_view where, const char* key,
                  json::value_t type) {
  if (!obj.contains(key)) return nullptr;
  const json& value = obj.at(key);
  if (value.type() != type &&
      !(type == json::value_t::object && value.is_object()))
    throw ConfigError("config key has the wrong type: " + key_path(where, key));
  return &value;
}

template <typename T>
void read_number(const json& obj, std::string_view where, const char* key,
                 T* out) {
  if (!obj.contains(key)) return;
  const json& value = obj.at(key);
  if (!value.is_number())
    throw ConfigError("config key must be a number: " + key_path(where, key));
  if constexpr (std::is_unsigned_v<T>) {
    if (value.is_number_float() || (value.is_number_integer() &&
                                    value.get<std::int64_t>() < 0))
      throw ConfigError("config key must be a non-negative integer: " +
                        key_path(where, key));
  } else if constexpr (std::is_integral_v<T>) {
    if (value.is_number_float())
      throw ConfigError("config key must be an integer: " +
                        key_path(where, key));
  }
  *out = value.get<T>();
}

void read_string(const json& obj, std::string_view where, const char* key,
                 std::string* out) {
  if (!obj.contains(key)) return;
  const json& value = obj.at(key);
  if (!value.is_string())
    throw ConfigError("config key must be a string: " + key_path(where, key));
  *out = value.get<std::string>();
}

void read_bool(const json& obj, std::string_view where, const char* key,
               bool* out) {
  if (!obj.contains(key)) return;
  const json& value = obj.at(key);
  if (!value.is_boolean())
    throw ConfigError("config key must be a boolean: " + key_path(where, key));
  *out = value.get<bool>();
}

UserModel::Rates parse_rates(const json& obj, std::string_view where) {
  check_keys(obj, where, {"terms", "keyphrases", "embeddings"});
  UserModel::Rates rates;
  read_number(obj, where, "terms", &rates.terms);
  read_number(obj, where, "keyphrases", &rates.keyphrases);
  read_number(obj, where, "embeddings", &rates.embeddings);
  return rates;
}

void check_rates(const UserModel::Rates& rates, std::string_view where) {
  for (double rate : {rates.terms, rates.keyphrases, rates.embeddings})
    if (rate < 0.0 || rate > 1.0)
      throw ConfigError("click rates must lie in [0, 1]: " +
                        std::string(where));
}

}  // namespace

void AppConfig::validate() const {
  if (data_dir.empty()) throw ConfigError("data_dir must not be empty");
  if (http_port < 1 || http_port > 65535)
    throw ConfigError("http_port must lie in [1, 65535]");

  experiment.validate();

  if (mlt.max_query_terms < 1)
    throw ConfigError("more_like_this.max_query_terms must be at least 1");

  if (embedding.dim < 1) throw ConfigError("embedding.dim must be at least 1");
  if (embedding.epochs < 1)
    throw ConfigError("embedding.epochs must be at least 1");
  if (embedding.negative < 1)
    throw ConfigError("embedding.negative must be at least 1");
  if (embedding.min_count < 1)
    throw ConfigError("embedding.min_count must be at least 1");
  if (embedding.threads < 1)
    throw ConfigError("embedding.threads must be at least 1");
  if (embedding.alpha_end <= 0.0 ||
      embedding.alpha_end > embedding.alpha_start)
    throw ConfigError(
        "embedding learning rate must satisfy 0 < alpha_end <= alpha_start");

  if (user_model.position_bias <= 0.0 || user_model.position_bias > 1.0)
    throw ConfigError("user_model.position_bias must lie in (0, 1]");
  if (user_model.deliveries_per_day < 1)
    throw ConfigError("user_model.deliveries_per_day must be at least 1");
  check_rates(user_model.default_rates, "user_model.default_rates");
  for (const auto& [name, rates] : user_model.scenario_rates) {
    check_rates(rates, "user_model.scenario_rates." + name);
    if (!experiment.find_scenario(name))
      throw ConfigError("user_model.scenario_rates references an unknown "
                        "scenario: " +
                        name);
  }
}

AppConfig default_config() {
  AppConfig config;
  config.experiment.scenarios.push_back({"default", "", 6});
  return config;
}

AppConfig parse_config(std::string_view json_text) {
  const json root = json::parse(json_text, nullptr, false);
  if (root.is_discarded() || !root.is_object())
    throw ConfigError("config is not a JSON object");

  check_keys(root, "",
             {"data_dir", "http_port", "index_keywords", "rng_seed",
              "arm_weights", "scenarios", "keyphrase_arm", "more_like_this",
              "embedding", "user_model"});

  AppConfig config;
  read_string(root, "", "data_dir", &config.data_dir);
  read_number(root, "", "http_port", &config.http_port);
  read_bool(root, "", "index_keywords", &config.index_keywords);
  read_number(root, "", "rng_seed", &config.experiment.rng_seed);

  if (const json* weights =
          child(root, "", "arm_weights", json::value_t::object)) {
    check_keys(*weights, "arm_weights", {"terms", "keyphrases", "embeddings"});
    read_number(*weights, "arm_weights", "terms",
                &config.experiment.arm_weights.terms);
    read_number(*weights, "arm_weights", "keyphrases",
                &config.experiment.arm_weights.keyphrases);
    read_number(*weights, "arm_weights", "embeddings",
                &config.experiment.arm_weights.embeddings);
  }

  if (const json* scenarios =
          child(root, "", "scenarios", json::value_t::array)) {
    for (std::size_t i = 0; i < scenarios->size(); ++i) {
      const json& entry = scenarios->at(i);
      const std::string where = "scenarios[" + std::to_string(i) + "]";
      if (!entry.is_object())
        throw ConfigError("config key has the wrong type: " + where);
      check_keys(entry, where, {"name", "corpus", "max_items"});
      ScenarioConfig scenario;
      read_string(entry, where, "name", &scenario.name);
      if (scenario.name.empty())
        throw ConfigError("scenario name must not be empty: " + where);
      read_string(entry, where, "corpus", &scenario.corpus_tag);
      read_number(entry, where, "max_items", &scenario.max_items);
      config.experiment.scenarios.push_back(std::move(scenario));
    }
  }
  if (config.experiment.scenarios.empty())
    config.experiment.scenarios.push_back({"default", "", 6});

  if (const json* kp = child(root, "", "keyphrase_arm", json::value_t::object)) {
    check_keys(*kp, "keyphrase_arm",
               {"random_count_probability", "min_count", "max_count"});
    read_number(*kp, "keyphrase_arm", "random_count_probability",
                &config.experiment.keyphrase.random_count_probability);
    read_number(*kp, "keyphrase_arm", "min_count",
                &config.experiment.keyphrase.min_count);
    read_number(*kp, "keyphrase_arm", "max_count",
                &config.experiment.keyphrase.max_count);
  }

  if (const json* mlt =
          child(root, "", "more_like_this", json::value_t::object)) {
    check_keys(*mlt, "more_like_this",
               {"min_term_freq", "min_doc_freq", "max_query_terms"});
    read_number(*mlt, "more_like_this", "min_term_freq",
                &config.mlt.min_term_freq);
    read_number(*mlt, "more_like_this", "min_doc_freq",
                &config.mlt.min_doc_freq);
    read_number(*mlt, "more_like_this", "max_query_terms",
                &config.mlt.max_query_terms);
  }

  if (const json* emb = child(root, "", "embedding", json::value_t::object)) {
    check_keys(*emb, "embedding",
               {"dim", "epochs", "negative", "min_count", "alpha_start",
                "alpha_end", "threads"});
    read_number(*emb, "embedding", "dim", &config.embedding.dim);
    read_number(*emb, "embedding", "epochs", &config.embedding.epochs);
    read_number(*emb, "embedding", "negative", &config.embedding.negative);
    read_number(*emb, "embedding", "min_count", &config.embedding.min_count);
    read_number(*emb, "embedding", "alpha_start",
                &config.embedding.alpha_start);
    read_number(*emb, "embedding", "alpha_end", &config.embedding.alpha_end);
    read_number(*emb, "embedding", "threads", &config.embedding.threads);
  }

  if (const json* user = child(root, "", "user_model", json::value_t::object)) {
    check_keys(*user, "user_model",
               {"position_bias", "deliveries_per_day", "default_rates",
                "scenario_rates"});
    read_number(*user, "user_model", "position_bias",
                &config.user_model.position_bias);
    read_number(*user, "user_model", "deliveries_per_day",
                &config.user_model.deliveries_per_day);
    if (const json* rates =
            child(*user, "user_model", "default_rates", json::value_t::object))
      config.user_model.default_rates =
          parse_rates(*rates, "user_model.default_rates");
    if (const json* per_scenario = child(*user, "user_model", "scenario_rates",
                                         json::value_t::object)) {
      for (auto it = per_scenario->begin(); it != per_scenario->end(); ++it) {
        if (!it.value().is_object())
          throw ConfigError("config key has the wrong type: "
                            "user_model.scenario_rates." +
                            it.key());
        config.user_model.scenario_rates[it.key()] = parse_rates(
            it.value(), "user_model.scenario_rates." + it.key());
      }
    }
  }

  config.validate();
  return config;
}

AppConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void apply_env_overrides(AppConfig& config, const EnvLookup& lookup) {
  auto get = [&lookup](const char* name) -> const char* {
    return lookup ? lookup(name) : std::getenv(name);
  };
  if (const char* dir = get("RELAREC_DATA_DIR")) config.data_dir = dir;
  if (const char* seed = get("RELAREC_SEED")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(seed, &end, 10);
    if (end == seed || *end != '\0')
      throw ConfigError("RELAREC_SEED must be an unsigned integer");
    config.experiment.rng_seed = value;
  }
  config.validate();
}

ArtifactPaths::ArtifactPaths(std::string data_dir)
    : data_dir_(std::move(data_dir)) {
  while (data_dir_.size() > 1 && data_dir_.back() == '/') data_dir_.pop_back();
}

std::string ArtifactPaths::key(std::string_view corpus_tag) {
  return corpus_tag.empty() ? "all" : std::string(corpus_tag);
}

std::string ArtifactPaths::join(std::string_view name) const {
  return data_dir_ + "/" + std::string(name);
}

std::string ArtifactPaths::corpus() const { return join("corpus.bin"); }

std::string ArtifactPaths::terms_index(std::string_view corpus_tag) const {
  return join("terms-" + key(corpus_tag) + ".idx");
}

std::string ArtifactPaths::keyphrase_index(std::string_view corpus_tag) const {
  return join("keyphrases-" + key(corpus_tag) + ".idx");
}

std::string ArtifactPaths::keyphrase_dump(std::string_view corpus_tag) const {
  return join("keyphrases-" + key(corpus_tag) + ".ndjson");
}

std::string ArtifactPaths::embeddings(std::string_view corpus_tag) const {
  return join("embeddings-" + key(corpus_tag) + ".bin");
}

std::string ArtifactPaths::deliveries_log() const {
  return join("deliveries.log");
}

std::string ArtifactPaths::clicks_log() const { return join("clicks.log"); }

std::string ArtifactPaths::engine_state() const {
  return join("engine_state.json");
}

std::string ArtifactPaths::report_text() const { return join("report.txt"); }

std::string ArtifactPaths::report_ndjson() const {
  return join("report.ndjson");
}

std::string ArtifactPaths::report_bars_svg() const {
  return join("report_bars.svg");
}

std::string ArtifactPaths::report_curve_svg() const {
  return join("report_curve.svg");
}

}  // namespace relarec
