// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

// relarec: operator command line for the related-article service.
//
//   ingest            load an NDJSON corpus into the binary store
//   index             build term or keyphrase indexes per scenario corpus
//   train-embeddings  train document vectors per scenario corpus
//   serve             run the HTTP recommendation endpoint
//   simulate          drive synthetic traffic through the engine
//   report            aggregate the delivery/click logs into reports
//
// Settings resolve in precedence order: command-line flags beat
// environment variables (RELAREC_CONFIG, RELAREC_DATA_DIR, RELAREC_SEED),
// which beat the config file, which beats built-in defaults.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "relarec/analytics.hpp"
#include "relarec/config.hpp"
#include "relarec/corpus.hpp"
#include "relarec/embedding.hpp"
#include "relarec/error.hpp"
#include "relarec/experiment.hpp"
#include "relarec/inverted_index.hpp"
#include "relarec/keyphrase.hpp"
#include "relarec/service.hpp"
#include "relarec/text_pipeline.hpp"

namespace {

using namespace relarec;

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

// Distinct corpus tags over the configured scenarios, insertion order.
// Artifacts are built once per tag and shared by scenarios that use it.
std::vector<std::string> distinct_tags(const AppConfig& config) {
  std::vector<std::string> tags;
  for (const auto& scenario : config.experiment.scenarios)
    if (std::find(tags.begin(), tags.end(), scenario.corpus_tag) == tags.end())
      tags.push_back(scenario.corpus_tag);
  return tags;
}

CorpusStore open_corpus(const ArtifactPaths& paths) {
  if (!std::filesystem::exists(paths.corpus()))
    throw IoError("no corpus found at " + paths.corpus() +
                  " (run `relarec ingest` first)");
  return CorpusStore::open(paths.corpus());
}

// Loads whatever artifacts exist for one corpus tag; absent files stay
// null. The caller decides which members are mandatory.
ScenarioRuntime load_runtime(const ArtifactPaths& paths,
                             const std::string& tag) {
  ScenarioRuntime runtime;
  if (std::filesystem::exists(paths.terms_index(tag)))
    runtime.terms = std::make_shared<InvertedIndex>(
        InvertedIndex::load(paths.terms_index(tag)));
  if (std::filesystem::exists(paths.keyphrase_index(tag)))
    runtime.keyphrases = std::make_shared<KeyphraseIndex>(
        KeyphraseIndex::load(paths.keyphrase_index(tag)));
  if (std::filesystem::exists(paths.embeddings(tag)))
    runtime.embeddings = std::make_shared<EmbeddingModel>(
        EmbeddingModel::load(paths.embeddings(tag)));
  return runtime;
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

std::string percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", rate * 100.0);
  return buf;
}

int cmd_ingest(const AppConfig& config, const std::string& input) {
  ArtifactPaths paths(config.data_dir);
  CorpusStore store;
  IngestSummary summary = store.ingest_file(input);
  for (const auto& rejection : summary.rejections)
    std::cerr << "line " << rejection.line << ": " << rejection.reason << "\n";
  if (summary.accepted == 0)
    throw Error("no documents ingested from " + input);
  std::filesystem::create_directories(paths.data_dir());
  store.save(paths.corpus());
  std::cout << "ingested " << summary.accepted << " documents ("
            << summary.rejected() << " rejected) -> " << paths.corpus()
            << "\n";
  return 0;
}

int cmd_index(const AppConfig& config, const std::string& algo) {
  ArtifactPaths paths(config.data_dir);
  CorpusStore store = open_corpus(paths);
  TextPipeline pipe;

  for (const std::string& tag : distinct_tags(config)) {
    const std::string key = ArtifactPaths::key(tag);
    if (algo == "terms") {
      InvertedIndex::BuildOptions options;
      options.corpus_tag = tag;
      options.index_keywords = config.index_keywords;
      InvertedIndex index = InvertedIndex::build(store, pipe, options);
      index.save(paths.terms_index(tag));
      std::cout << "term index [" << key << "]: " << index.doc_count()
                << " documents -> " << paths.terms_index(tag) << "\n";
    } else {
      KeyphraseExtractor extractor;
      KeyphraseIndex index = KeyphraseIndex::build(store, pipe, extractor, tag);
      index.save(paths.keyphrase_index(tag));

      // Human-auditable sidecar: the selected keyphrases per document.
      std::ofstream dump(paths.keyphrase_dump(tag),
                         std::ios::binary | std::ios::trunc);
      for (const Document* doc : store.select(tag))
        dump_keyphrases(dump, doc->doc_id, extractor.extract(*doc, pipe));
      if (!dump) throw IoError("cannot write " + paths.keyphrase_dump(tag));

      std::cout << "keyphrase index [" << key << "]: " << index.doc_count()
                << " documents -> " << paths.keyphrase_index(tag) << "\n";
    }
  }
  return 0;
}

int cmd_train(const AppConfig& config) {
  ArtifactPaths paths(config.data_dir);
  CorpusStore store = open_corpus(paths);
  TextPipeline pipe;

  for (const std::string& tag : distinct_tags(config)) {
    EmbeddingModel model = EmbeddingModel::train(
        store, pipe, config.embedding, config.experiment.rng_seed, tag);
    model.save(paths.embeddings(tag));
    std::cout << "embeddings [" << ArtifactPaths::key(tag)
              << "]: " << model.doc_count() << " documents, dim "
              << model.dim() << " -> " << paths.embeddings(tag) << "\n";
  }
  return 0;
}

int cmd_serve(const AppConfig& config, const std::string& host, int port,
              bool debug) {
  ArtifactPaths paths(config.data_dir);
  CorpusStore store = open_corpus(paths);
  ExperimentEngine engine(store, config.experiment, paths.deliveries_log(),
                          paths.clicks_log(), config.mlt);

  // A scenario with a term index is servable; keyphrase or embedding
  // artifacts may be missing (those arms fall back to terms). Scenarios
  // with no term index stay unattached and answer 503.
  std::size_t attached = 0;
  for (const auto& scenario : config.experiment.scenarios) {
    ScenarioRuntime runtime = load_runtime(paths, scenario.corpus_tag);
    if (!runtime.terms) {
      std::cerr << "scenario '" << scenario.name << "' not servable: "
                << paths.terms_index(scenario.corpus_tag) << " is missing\n";
      continue;
    }
    engine.attach(scenario.name, std::move(runtime));
    ++attached;
  }
  if (attached == 0)
    throw Error("no term index under " + paths.data_dir() +
                " (run `relarec index --algo terms` first)");
  engine.load_state(paths.engine_state());

  RecommendationService::Options options;
  options.debug = debug;
  RecommendationService service(engine, options);
  const int bound_port = service.start(host, port);
  std::cout << "serving on " << host << ":" << bound_port << std::endl;

  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  while (!g_stop.load())
    std::this_thread::sleep_for(std::chrono::milliseconds(100));

  std::cout << "shutting down\n";
  service.stop();  // flushes the engine logs
  engine.save_state(paths.engine_state());
  return 0;
}

int cmd_simulate(const AppConfig& config, std::size_t requests) {
  ArtifactPaths paths(config.data_dir);
  CorpusStore store = open_corpus(paths);
  ExperimentEngine engine(store, config.experiment, paths.deliveries_log(),
                          paths.clicks_log(), config.mlt);

  // Unlike serve, a simulation measures all three arms, so every scenario
  // must have its full artifact set.
  for (const auto& scenario : config.experiment.scenarios) {
    ScenarioRuntime runtime = load_runtime(paths, scenario.corpus_tag);
    if (!runtime.terms)
      throw Error("scenario '" + scenario.name + "' has no term index (run " +
                  "`relarec index --algo terms` first)");
    if (!runtime.keyphrases)
      throw Error("scenario '" + scenario.name +
                  "' has no keyphrase index (run " +
                  "`relarec index --algo keyphrase` first)");
    if (!runtime.embeddings)
      throw Error("scenario '" + scenario.name + "' has no embeddings (run " +
                  "`relarec train-embeddings` first)");
    engine.attach(scenario.name, std::move(runtime));
  }

  SimulationSummary summary =
      simulate(engine, config.user_model, requests, config.experiment.rng_seed);
  engine.flush();
  engine.save_state(paths.engine_state());

  std::cout << "simulated " << summary.deliveries << " deliveries ("
            << summary.delivered_items << " items, " << summary.clicks
            << " clicks, " << summary.fallbacks << " fallbacks)\n";
  if (auto rate = ctr(summary.clicks, summary.delivered_items))
    std::cout << "overall CTR " << percent(*rate) << "\n";
  return 0;
}

int cmd_report(const AppConfig& config, bool svg) {
  ArtifactPaths paths(config.data_dir);
  ExperimentLogs logs =
      ExperimentLogs::read(paths.deliveries_log(), paths.clicks_log());
  Report report = build_report(logs);

  const std::string text = render_text(report);
  write_file(paths.report_text(), text);
  write_file(paths.report_ndjson(), render_ndjson(report));
  if (svg) {
    write_file(paths.report_bars_svg(), render_svg_bars(report));
    write_file(paths.report_curve_svg(), render_svg_curve(report));
  }
  std::cout << text;
  return 0;
}

// Config file from --config, else RELAREC_CONFIG, else defaults. A file
// that was named explicitly but cannot be read is an error, never a
// silent fallback.
AppConfig resolve_config(const std::string& flag_path) {
  std::string path = flag_path;
  if (path.empty())
    if (const char* env = std::getenv("RELAREC_CONFIG")) path = env;
  AppConfig config = path.empty() ? default_config() : load_config_file(path);
  apply_env_overrides(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"related-article recommendation service"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  std::string config_path;
  std::string data_dir;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path,
                 "JSON config file (env: RELAREC_CONFIG)");
  app.add_option("--data-dir", data_dir,
                 "artifact directory (env: RELAREC_DATA_DIR)");
  app.add_option("--seed", seed, "RNG seed (env: RELAREC_SEED)");

  auto* ingest = app.add_subcommand("ingest", "load an NDJSON corpus");
  std::string input;
  ingest->add_option("--input", input, "NDJSON file, one document per line")
      ->required();

  auto* index = app.add_subcommand("index", "build recommendation indexes");
  std::string algo;
  index->add_option("--algo", algo, "index type: terms or keyphrase")
      ->required()
      ->check(CLI::IsMember({"terms", "keyphrase"}));

  auto* train =
      app.add_subcommand("train-embeddings", "train document vectors");

  auto* serve = app.add_subcommand("serve", "run the HTTP endpoint");
  std::string host = "127.0.0.1";
  int port = 0;
  bool debug = false;
  serve->add_option("--host", host, "bind address (default 127.0.0.1)");
  serve->add_option("--port", port, "TCP port (default: config http_port)");
  serve->add_flag("--debug", debug, "expose the drawn arm in responses");

  auto* sim = app.add_subcommand("simulate", "run synthetic traffic");
  std::size_t requests = 10000;
  sim->add_option("--requests", requests, "number of deliveries to issue")
      ->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "aggregate the logs");
  bool svg = false;
  report->add_flag("--svg", svg, "also write the SVG charts");

  CLI11_PARSE(app, argc, argv);

  try {
    AppConfig config = resolve_config(config_path);
    if (app.count("--data-dir")) config.data_dir = data_dir;
    if (app.count("--seed")) config.experiment.rng_seed = seed;
    config.validate();

    if (*ingest) return cmd_ingest(config, input);
    if (*index) return cmd_index(config, algo);
    if (*train) return cmd_train(config);
    if (*serve)
      return cmd_serve(config, host,
                       serve->count("--port") ? port : config.http_port, debug);
    if (*sim) return cmd_simulate(config, requests);
    if (*report) return cmd_report(config, svg);
  } catch (const relarec::Error& error) {
    std::cerr << "relarec: error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
