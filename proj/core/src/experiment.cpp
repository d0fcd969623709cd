// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#include "relarec/experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <utility>

#include <json.hpp>

#include "relarec/error.hpp"

namespace relarec {

namespace {

using ordered_json = nlohmann::ordered_json;

std::int64_t wall_clock_seconds() {
  return static_cast<std::int64_t>(std::time(nullptr));
}

std::string click_key(std::string_view delivery_id, std::uint32_t rank) {
  std::string key(delivery_id);
  key += '#';
  key += std::to_string(rank);
  return key;
}

}  // namespace

std::string_view arm_name(Arm arm) {
  switch (arm) {
    case Arm::terms:
      return "terms";
    case Arm::keyphrases:
      return "keyphrases";
    case Arm::embeddings:
      return "embeddings";
  }
  throw Error("invalid arm value");
}

Arm arm_from_name(std::string_view name) {
  if (name == "terms") return Arm::terms;
  if (name == "keyphrases") return Arm::keyphrases;
  if (name == "embeddings") return Arm::embeddings;
  throw Error("unknown arm: " + std::string(name));
}

const ScenarioConfig* ExperimentConfig::find_scenario(
    std::string_view name) const {
  for (const auto& s : scenarios)
    if (s.name == name) return &s;
  return nullptr;
}

void ExperimentConfig::validate() const {
  const ArmWeights& w = arm_weights;
  if (w.terms < 0.0 || w.keyphrases < 0.0 || w.embeddings < 0.0)
    throw ConfigError("arm weights must be non-negative");
  const double sum = w.terms + w.keyphrases + w.embeddings;
  if (std::fabs(sum - 1.0) > 1e-9)
    throw ConfigError("arm weights must sum to 1");
  if (scenarios.empty()) throw ConfigError("at least one scenario required");
  for (const auto& s : scenarios) {
    if (s.name.empty()) throw ConfigError("scenario name must not be empty");
    if (s.max_items < 1)
      throw ConfigError("scenario max_items must be at least 1: " + s.name);
    for (const auto& other : scenarios)
      if (&other != &s && other.name == s.name)
        throw ConfigError("duplicate scenario name: " + s.name);
  }
  if (keyphrase.random_count_probability < 0.0 ||
      keyphrase.random_count_probability > 1.0)
    throw ConfigError("random_count_probability must be in [0, 1]");
  if (keyphrase.min_count < 1 || keyphrase.max_count < keyphrase.min_count ||
      keyphrase.max_count > 19)
    throw ConfigError("keyphrase count range must satisfy 1 <= min <= max <= 19");
}

ArmChoice assign_arm(const ExperimentConfig& config, Rng& rng) {
  ArmChoice choice;
  const ArmWeights& w = config.arm_weights;
  const double u = rng.uniform01();
  if (u < w.terms) {
    choice.arm = Arm::terms;
  } else if (u < w.terms + w.keyphrases) {
    choice.arm = Arm::keyphrases;
  } else {
    choice.arm = Arm::embeddings;
  }
  if (choice.arm == Arm::keyphrases) {
    choice.combo = NgramCombo(
        static_cast<unsigned>(rng.below(NgramCombo::kCount)) + 1);
    const KeyphraseArmConfig& kp = config.keyphrase;
    if (rng.uniform01() < kp.random_count_probability) {
      choice.count = kp.min_count + static_cast<std::uint32_t>(rng.below(
                                        kp.max_count - kp.min_count + 1));
    }
  }
  return choice;
}

ExperimentEngine::ExperimentEngine(const CorpusStore& corpus,
                                   ExperimentConfig config,
                                   const std::string& deliveries_path,
                                   const std::string& clicks_path,
                                   const MoreLikeThisParams& mlt_params)
    : corpus_(corpus),
      config_(std::move(config)),
      mlt_params_(mlt_params),
      rng_(config_.rng_seed),
      clock_(wall_clock_seconds) {
  config_.validate();
  for (const auto& s : config_.scenarios) {
    std::vector<std::string> ids;
    for (const Document* doc : corpus_.select(s.corpus_tag))
      ids.push_back(doc->doc_id);
    scenario_docs_.emplace(s.name, std::move(ids));
  }

  replay_logs(deliveries_path, clicks_path);

  deliveries_out_.open(deliveries_path, std::ios::app);
  if (!deliveries_out_)
    throw IoError("cannot open delivery log for append: " + deliveries_path);
  clicks_out_.open(clicks_path, std::ios::app);
  if (!clicks_out_)
    throw IoError("cannot open click log for append: " + clicks_path);
}

void ExperimentEngine::replay_logs(const std::string& deliveries_path,
                                   const std::string& clicks_path) {
  std::ifstream din(deliveries_path);
  if (din) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(din, line)) {
      ++line_no;
      if (line.empty()) continue;
      ordered_json rec = ordered_json::parse(line, nullptr, false);
      if (rec.is_discarded() || !rec.is_object() ||
          !rec.contains("delivery_id") || !rec.contains("items"))
        throw DataIntegrityError("malformed delivery log line " +
                                 std::to_string(line_no));
      const std::string id = rec["delivery_id"].get<std::string>();
      delivery_items_[id] =
          static_cast<std::uint32_t>(rec["items"].size());
      if (id.size() > 1 && id[0] == 'd') {
        errno = 0;
        char* end = nullptr;
        const unsigned long long seq = std::strtoull(id.c_str() + 1, &end, 10);
        if (end && *end == '\0' && errno == 0 && seq + 1 > next_seq_)
          next_seq_ = seq + 1;
      }
    }
  }
  std::ifstream cin_(clicks_path);
  if (cin_) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(cin_, line)) {
      ++line_no;
      if (line.empty()) continue;
      ordered_json rec = ordered_json::parse(line, nullptr, false);
      if (rec.is_discarded() || !rec.is_object() ||
          !rec.contains("delivery_id") || !rec.contains("rank"))
        throw DataIntegrityError("malformed click log line " +
                                 std::to_string(line_no));
      clicked_.insert(click_key(rec["delivery_id"].get<std::string>(),
                                rec["rank"].get<std::uint32_t>()));
    }
  }
}

void ExperimentEngine::attach(std::string_view scenario,
                              ScenarioRuntime runtime) {
  if (!config_.find_scenario(scenario))
    throw Error("unknown scenario: " + std::string(scenario));
  runtimes_[std::string(scenario)] = std::move(runtime);
}

bool ExperimentEngine::ready(std::string_view scenario) const {
  auto it = runtimes_.find(std::string(scenario));
  return it != runtimes_.end() && it->second.terms != nullptr;
}

const std::vector<std::string>& ExperimentEngine::scenario_docs(
    std::string_view scenario) const {
  auto it = scenario_docs_.find(std::string(scenario));
  if (it == scenario_docs_.end())
    throw Error("unknown scenario: " + std::string(scenario));
  return it->second;
}

void ExperimentEngine::set_clock(std::function<std::int64_t()> clock) {
  std::lock_guard<std::mutex> lock(mutex_);
  clock_ = clock ? std::move(clock) : wall_clock_seconds;
}

std::vector<ScoredDoc> ExperimentEngine::run_arm(
    const ScenarioRuntime& runtime, const ArmChoice& choice,
    std::string_view doc_id, std::size_t k,
    std::optional<std::uint32_t>* used) const {
  try {
    switch (choice.arm) {
      case Arm::terms:
        if (!runtime.terms) return {};
        return runtime.terms->recommend(doc_id, mlt_params_, k);
      case Arm::keyphrases: {
        if (!runtime.keyphrases) return {};
        const auto& combo = *choice.combo;
        if (!runtime.keyphrases->contains_doc(doc_id)) return {};
        std::uint32_t available = 0;
        for (const auto& entry : runtime.keyphrases->entries(doc_id))
          if (combo.contains(entry.n)) ++available;
        std::uint32_t actual = available;
        if (choice.count) actual = std::min(*choice.count, available);
        *used = actual;
        if (actual == 0) return {};
        return runtime.keyphrases->recommend(doc_id, combo, choice.count, k);
      }
      case Arm::embeddings:
        if (!runtime.embeddings) return {};
        if (!runtime.embeddings->contains_doc(doc_id)) return {};
        return runtime.embeddings->recommend(doc_id, k);
    }
  } catch (const NotFoundError&) {
    // A stale artifact that lacks the doc behaves like an empty result; the
    // caller falls back to the terms arm.
    return {};
  }
  return {};
}

DeliveryRecord ExperimentEngine::deliver(std::string_view scenario,
                                         std::string_view query_doc_id,
                                         std::optional<std::uint32_t> k) {
  const ScenarioConfig* scen = config_.find_scenario(scenario);
  if (!scen) throw Error("unknown scenario: " + std::string(scenario));

  auto runtime_it = runtimes_.find(scen->name);
  if (runtime_it == runtimes_.end() || !runtime_it->second.terms)
    throw Error("scenario not ready (indexes missing): " + scen->name);
  const ScenarioRuntime& runtime = runtime_it->second;

  if (!corpus_.contains(query_doc_id) ||
      (!scen->corpus_tag.empty() &&
       corpus_.get(query_doc_id).corpus_tag != scen->corpus_tag))
    throw NotFoundError("unknown document: " + std::string(query_doc_id));

  std::size_t k_eff = std::min<std::uint32_t>(scen->max_items, 6);
  if (k) k_eff = std::min<std::size_t>(k_eff, *k);
  if (k_eff == 0) k_eff = 1;

  // Draw the arm and the id under the lock so concurrent deliveries see a
  // single serialized RNG / sequence; the recommender runs unlocked over
  // immutable indexes.
  ArmChoice choice;
  std::string delivery_id;
  std::int64_t now = 0;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    choice = assign_arm(config_, rng_);
    delivery_id = "d" + std::to_string(next_seq_++);
    now = clock_();
  }

  DeliveryRecord record;
  record.delivery_id = delivery_id;
  record.scenario = scen->name;
  record.query_doc_id = std::string(query_doc_id);
  record.arm = choice.arm;
  record.timestamp = now;

  std::optional<std::uint32_t> used;
  std::vector<ScoredDoc> hits =
      run_arm(runtime, choice, query_doc_id, k_eff, &used);

  if (hits.empty() && choice.arm != Arm::terms) {
    ArmChoice fallback;
    fallback.arm = Arm::terms;
    hits = run_arm(runtime, fallback, query_doc_id, k_eff, nullptr);
    record.arm = Arm::terms;
    record.fallback = true;
  } else if (choice.arm == Arm::keyphrases) {
    record.combo = choice.combo;
    record.count = choice.count;
    record.used = used;
  }

  if (hits.empty()) throw Error("no recommendations: " + record.query_doc_id);

  record.items.reserve(hits.size());
  for (const auto& hit : hits) record.items.push_back(hit.doc_id);

  append_delivery(record);
  return record;
}

void ExperimentEngine::append_delivery(const DeliveryRecord& record) {
  ordered_json rec;
  rec["delivery_id"] = record.delivery_id;
  rec["scenario"] = record.scenario;
  rec["query_doc_id"] = record.query_doc_id;
  rec["arm"] = std::string(arm_name(record.arm));
  if (record.arm == Arm::keyphrases) {
    rec["combo"] = std::string(record.combo->name());
    if (record.count)
      rec["count"] = *record.count;
    else
      rec["count"] = nullptr;  // "all"
    rec["used"] = record.used ? ordered_json(*record.used) : ordered_json();
  }
  rec["fallback"] = record.fallback;
  rec["items"] = record.items;
  rec["timestamp"] = record.timestamp;

  std::lock_guard<std::mutex> lock(mutex_);
  delivery_items_[record.delivery_id] =
      static_cast<std::uint32_t>(record.items.size());
  deliveries_out_ << rec.dump() << '\n';
  if (!deliveries_out_) throw IoError("delivery log write failed");
}

bool ExperimentEngine::record_click(std::string_view delivery_id,
                                    std::uint32_t rank) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = delivery_items_.find(std::string(delivery_id));
  if (it == delivery_items_.end())
    throw NotFoundError("unknown delivery: " + std::string(delivery_id));
  if (rank < 1 || rank > it->second)
    throw Error("rank out of range: " + std::to_string(rank) + " of " +
                std::to_string(it->second));
  auto [click_it, inserted] = clicked_.insert(click_key(delivery_id, rank));
  if (!inserted) return false;  // idempotent duplicate

  ordered_json rec;
  rec["delivery_id"] = std::string(delivery_id);
  rec["rank"] = rank;
  rec["timestamp"] = clock_();
  clicks_out_ << rec.dump() << '\n';
  if (!clicks_out_) throw IoError("click log write failed");
  return true;
}

void ExperimentEngine::flush() {
  std::lock_guard<std::mutex> lock(mutex_);
  deliveries_out_.flush();
  clicks_out_.flush();
}

void ExperimentEngine::save_state(const std::string& path) const {
  std::lock_guard<std::mutex> lock(mutex_);
  ordered_json state;
  state["rng"] = rng_.save_state();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write state file: " + path);
  out << state.dump() << '\n';
}

void ExperimentEngine::load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) return;  // fresh start
  ordered_json state = ordered_json::parse(in, nullptr, false);
  if (state.is_discarded() || !state.is_object() || !state.contains("rng"))
    throw DataIntegrityError("malformed state file: " + path);
  std::lock_guard<std::mutex> lock(mutex_);
  rng_.load_state(state["rng"].get<std::string>());
}

double UserModel::Rates::of(Arm arm) const {
  switch (arm) {
    case Arm::terms:
      return terms;
    case Arm::keyphrases:
      return keyphrases;
    case Arm::embeddings:
      return embeddings;
  }
  return 0.0;
}

double UserModel::click_probability(std::string_view scenario, Arm arm,
                                    std::uint32_t rank) const {
  auto it = scenario_rates.find(std::string(scenario));
  const Rates& rates =
      it != scenario_rates.end() ? it->second : default_rates;
  return rates.of(arm) * std::pow(position_bias, static_cast<int>(rank) - 1);
}

SimulationSummary simulate(ExperimentEngine& engine, const UserModel& user,
                           std::size_t n_requests, std::uint64_t seed) {
  const ExperimentConfig& config = engine.config();
  if (user.deliveries_per_day < 1)
    throw ConfigError("deliveries_per_day must be at least 1");
  for (const auto& s : config.scenarios)
    if (engine.scenario_docs(s.name).empty())
      throw Error("scenario has no documents: " + s.name);

  Rng rng(seed);
  SimulationSummary summary;
  std::int64_t logical_now = 0;
  engine.set_clock([&logical_now] { return logical_now; });

  for (std::size_t i = 0; i < n_requests; ++i) {
    const std::uint64_t day = i / user.deliveries_per_day;
    const std::uint64_t within = i % user.deliveries_per_day;
    logical_now = static_cast<std::int64_t>(
        day * 86400 + within * 86400 / user.deliveries_per_day);

    const ScenarioConfig& scen =
        config.scenarios[rng.below(config.scenarios.size())];
    const auto& docs = engine.scenario_docs(scen.name);
    const std::string& doc = docs[rng.below(docs.size())];

    DeliveryRecord record;
    try {
      record = engine.deliver(scen.name, doc);
    } catch (const Error& e) {
      // A query doc that shares no terms with anything has no neighbors;
      // skip the request and keep the draw sequence moving.
      if (std::string_view(e.what()).starts_with("no recommendations"))
        continue;
      throw;
    }
    ++summary.deliveries;
    summary.delivered_items += record.items.size();
    summary.fallbacks += record.fallback ? 1 : 0;

    for (std::uint32_t rank = 1; rank <= record.items.size(); ++rank) {
      const double p = user.click_probability(scen.name, record.arm, rank);
      const double draw = rng.uniform01();  // always consume one draw per item
      if (draw < p && engine.record_click(record.delivery_id, rank))
        ++summary.clicks;
    }
  }

  engine.set_clock(nullptr);  // back to wall clock
  return summary;
}

}  // namespace relarec
