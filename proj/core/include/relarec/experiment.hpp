// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#pragma once

#include <cstdint>
#include <functional>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "relarec/corpus.hpp"
#include "relarec/embedding.hpp"
#include "relarec/inverted_index.hpp"
#include "relarec/keyphrase.hpp"
#include "relarec/rng.hpp"

namespace relarec {

enum class Arm { terms, keyphrases, embeddings };

std::string_view arm_name(Arm arm);
Arm arm_from_name(std::string_view name);  // throws Error on unknown names

struct ArmWeights {
  double terms = 0.95;
  double keyphrases = 0.03;
  double embeddings = 0.02;
};

struct ScenarioConfig {
  std::string name;
  std::string corpus_tag;  // empty = whole store
  std::uint32_t max_items = 6;
};

// Sub-draws for the keyphrase arm: which n-gram fields to search, and
// whether to cap the number of query keyphrases at a random value instead
// of using all of them.
struct KeyphraseArmConfig {
  double random_count_probability = 0.5;
  std::uint32_t min_count = 1;
  std::uint32_t max_count = 19;
};

struct ExperimentConfig {
  ArmWeights arm_weights;
  std::vector<ScenarioConfig> scenarios;
  KeyphraseArmConfig keyphrase;
  std::uint64_t rng_seed = 0;

  const ScenarioConfig* find_scenario(std::string_view name) const;
  void validate() const;  // throws ConfigError
};

struct ArmChoice {
  Arm arm = Arm::terms;
  std::optional<NgramCombo> combo;     // set iff arm == keyphrases
  std::optional<std::uint32_t> count;  // keyphrases only; empty = "all"
};

// Categorical draw over the arm weights (cumulative intervals in the order
// terms, keyphrases, embeddings), plus the keyphrase sub-draws: a combo
// uniform over the seven fields, and a count that is "all" with probability
// 1 - random_count_probability or uniform in [min_count, max_count].
ArmChoice assign_arm(const ExperimentConfig& config, Rng& rng);

struct DeliveryRecord {
  std::string delivery_id;
  std::string scenario;
  std::string query_doc_id;
  Arm arm = Arm::terms;
  std::optional<NgramCombo> combo;     // iff arm == keyphrases
  std::optional<std::uint32_t> count;  // requested cap; empty = "all"
  std::optional<std::uint32_t> used;   // keyphrases actually searched
  bool fallback = false;               // the drawn arm produced nothing
  std::vector<std::string> items;      // doc ids; rank = position + 1
  std::int64_t timestamp = 0;          // seconds
};

// Per-scenario read-only recommenders. All three must outlive the engine.
struct ScenarioRuntime {
  std::shared_ptr<const InvertedIndex> terms;
  std::shared_ptr<const KeyphraseIndex> keyphrases;
  std::shared_ptr<const EmbeddingModel> embeddings;
};

// Owns arm assignment, delivery/click logging, and replay-safe state.
// Deliveries and clicks may come from many threads; the RNG, the id
// sequence, and each log file have a single serialized writer.
class ExperimentEngine {
 public:
  // Opens both logs in append mode. Existing log contents are replayed to
  // restore the id sequence and click-validation state, so a restarted
  // engine continues where the previous one stopped.
  ExperimentEngine(const CorpusStore& corpus, ExperimentConfig config,
                   const std::string& deliveries_path,
                   const std::string& clicks_path,
                   const MoreLikeThisParams& mlt_params = {});

  void attach(std::string_view scenario, ScenarioRuntime runtime);
  bool ready(std::string_view scenario) const;

  const ExperimentConfig& config() const { return config_; }
  const CorpusStore& corpus() const { return corpus_; }
  const std::vector<std::string>& scenario_docs(std::string_view scenario) const;

  // Draws an arm, runs the matching recommender with k = max_items (capped
  // at 6), and appends the persisted record. An arm that yields nothing
  // falls back to the terms arm with fallback=true; if terms also yields
  // nothing, throws "no recommendations".
  DeliveryRecord deliver(std::string_view scenario, std::string_view query_doc_id,
                         std::optional<std::uint32_t> k = std::nullopt);

  // True when the click was stored; false when the (delivery, rank) pair
  // was already recorded (idempotent). Unknown delivery -> NotFoundError;
  // rank outside the delivery's item range -> Error.
  bool record_click(std::string_view delivery_id, std::uint32_t rank);

  std::size_t deliveries_logged() const { return delivery_items_.size(); }
  std::size_t clicks_logged() const { return clicked_.size(); }

  void flush();

  // RNG + logical clock state, for restart-identical behavior across runs.
  void save_state(const std::string& path) const;
  void load_state(const std::string& path);  // no-op when the file is absent

  // Timestamp source, seconds. Defaults to wall-clock time; the simulator
  // installs a logical clock.
  void set_clock(std::function<std::int64_t()> clock);

 private:
  std::vector<ScoredDoc> run_arm(const ScenarioRuntime& runtime,
                                 const ArmChoice& choice,
                                 std::string_view doc_id, std::size_t k,
                                 std::optional<std::uint32_t>* used) const;
  void append_delivery(const DeliveryRecord& record);
  void replay_logs(const std::string& deliveries_path,
                   const std::string& clicks_path);

  const CorpusStore& corpus_;
  ExperimentConfig config_;
  MoreLikeThisParams mlt_params_;
  std::unordered_map<std::string, ScenarioRuntime> runtimes_;
  std::unordered_map<std::string, std::vector<std::string>> scenario_docs_;

  mutable std::mutex mutex_;  // rng, sequence, maps, and both streams
  Rng rng_;
  std::uint64_t next_seq_ = 1;
  std::function<std::int64_t()> clock_;
  std::unordered_map<std::string, std::uint32_t> delivery_items_;
  std::unordered_set<std::string> clicked_;  // "<delivery_id>#<rank>"
  std::ofstream deliveries_out_;
  std::ofstream clicks_out_;
};

// Synthetic click behavior: per-scenario, per-arm base click probability,
// attenuated by rank as bias^(rank-1). bias = 1.0 means no position effect.
struct UserModel {
  struct Rates {
    double terms = 0.0;
    double keyphrases = 0.0;
    double embeddings = 0.0;

    double of(Arm arm) const;
  };

  Rates default_rates;
  std::unordered_map<std::string, Rates> scenario_rates;  // overrides
  double position_bias = 0.6;
  std::uint32_t deliveries_per_day = 10000;

  double click_probability(std::string_view scenario, Arm arm,
                           std::uint32_t rank) const;
};

struct SimulationSummary {
  std::size_t deliveries = 0;
  std::size_t delivered_items = 0;
  std::size_t clicks = 0;
  std::size_t fallbacks = 0;
};

// Issues n_requests deliveries over uniformly drawn scenarios and query
// docs, clicking each delivered item independently per the user model.
// Timestamps advance on a logical clock of deliveries_per_day requests per
// 86400-second day. A fixed seed makes the run bit-reproducible.
SimulationSummary simulate(ExperimentEngine& engine, const UserModel& user,
                           std::size_t n_requests, std::uint64_t seed);

}  // namespace relarec
