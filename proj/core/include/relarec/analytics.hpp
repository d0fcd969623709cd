// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "relarec/experiment.hpp"

namespace relarec {

// Parsed delivery log record; `item_count` delivered items at ranks 1..n.
struct LogDelivery {
  std::string delivery_id;
  std::string scenario;
  Arm arm = Arm::terms;
  std::optional<unsigned> combo_mask;  // keyphrase arm only
  std::optional<std::uint32_t> count;  // requested cap; empty = "all"
  std::optional<std::uint32_t> used;   // keyphrases actually searched
  bool fallback = false;
  std::uint32_t item_count = 0;
  std::int64_t timestamp = 0;
};

struct LogClick {
  std::string delivery_id;
  std::uint32_t rank = 0;
  std::int64_t timestamp = 0;
};

// Immutable batch view over the two append-only log files. Loading
// validates referential integrity: every click must join to a delivery,
// ranks must lie in the delivery's item range, and (delivery, rank) pairs
// must be unique.
struct ExperimentLogs {
  std::vector<LogDelivery> deliveries;
  std::vector<LogClick> clicks;
  std::unordered_map<std::string, std::size_t> by_id;  // delivery_id -> index

  // Missing delivery log -> IoError "no logs found"; a missing click log
  // reads as zero clicks. Malformed lines or broken joins ->
  // DataIntegrityError naming the line or delivery_id.
  static ExperimentLogs read(const std::string& deliveries_path,
                             const std::string& clicks_path);

  std::uint64_t delivered_items() const;
};

// clicks / deliveries, where `deliveries` counts delivered items. Zero
// deliveries -> empty optional (undefined), never 0.0. clicks > deliveries
// -> DataIntegrityError.
std::optional<double> ctr(std::uint64_t clicks, std::uint64_t deliveries);

struct SliceKey {
  std::string scenario;
  std::string algorithm;                // arm name
  std::optional<unsigned> combo_mask;   // set when split by combo
  std::optional<std::string> bucket;    // set when split by count bucket

  bool operator==(const SliceKey&) const = default;
};

struct CtrCell {
  SliceKey key;
  std::uint64_t deliveries = 0;  // delivered items in the slice
  std::uint64_t clicks = 0;
  std::optional<double> rate;    // empty when deliveries == 0
};

// Keyphrase-count buckets, inclusive edges. An out-of-range count (foreign
// logs) lands in a catch-all "other" bucket so slice totals stay complete.
struct CountBuckets {
  std::vector<std::uint32_t> lo = {1, 4, 8, 12};
  std::vector<std::uint32_t> hi = {3, 7, 11, 19};

  std::string label(std::uint32_t used) const;
  std::vector<std::string> labels() const;  // display order, no "other"
};

struct SliceOptions {
  bool by_combo = false;         // split the keyphrase arm per n-gram combo
  bool by_count_bucket = false;  // split the keyphrase arm per used-count bucket
  CountBuckets buckets;
};

// Every delivered item lands in exactly one cell; cell sums equal the log
// totals. Fallback deliveries carry arm=terms in the log and are counted
// there. Deterministic cell order: scenario (first appearance), algorithm
// (terms, keyphrases, embeddings), combo mask, bucket.
std::vector<CtrCell> slice_ctr(const ExperimentLogs& logs,
                               const SliceOptions& options = {});

// Per-day CTR values for one scenario (day = floor(timestamp / 86400)),
// restricted to one arm or pooled over all arms. Days without delivered
// items are skipped. Ascending day order.
std::vector<double> per_day_ctr(const ExperimentLogs& logs,
                                std::string_view scenario,
                                std::optional<Arm> algorithm);

enum class WilcoxonMethod { automatic, exact, approximate };

struct SignificanceResult {
  std::string label;        // what was compared
  double u = 0.0;           // Mann-Whitney U of the first sample
  double p_value = 1.0;     // two-sided
  std::string method;       // "exact" | "normal-approximation"
  std::string sample_unit;  // unit of each observation
};

// Two-sided Wilcoxon rank-sum (Mann-Whitney) test. `automatic` uses the
// exact null distribution when |a|+|b| <= 12 and the combined sample has no
// ties, otherwise a normal approximation with tie-corrected variance and
// continuity correction; zero variance -> p = 1. Empty sample -> Error.
SignificanceResult wilcoxon_rank_sum(
    const std::vector<double>& a, const std::vector<double>& b,
    WilcoxonMethod method = WilcoxonMethod::automatic);

struct ReportOptions {
  CountBuckets buckets;
  std::string sample_unit = "per-day CTR";
};

struct ReportRow {
  std::string label;
  std::vector<CtrCell> cells;  // one per Report.scenarios entry
};

// Fixed 10-row CTR table (embeddings; keyphrases overall; the seven
// combos; terms), count-bucket curve, and cross-scenario significance
// tests. `best_row[s]` is the table row with the highest defined CTR in
// scenario s over all rows; `worst_row[s]` the lowest over the three
// algorithm classes (embeddings, keyphrases overall, terms); -1 when no
// cell is defined.
struct Report {
  std::vector<std::string> scenarios;  // first-appearance order
  std::vector<ReportRow> table;
  std::vector<int> best_row;
  std::vector<int> worst_row;
  std::vector<CtrCell> class_bars;   // scenario x {terms,keyphrases,embeddings}
  std::vector<CtrCell> count_curve;  // scenario x count bucket
  std::vector<SignificanceResult> significance;
  std::uint64_t total_items = 0;
  std::uint64_t total_clicks = 0;
};

Report build_report(const ExperimentLogs& logs,
                    const ReportOptions& options = {});

// Plain-text table; best cell per scenario is wrapped in ** **, worst in
// _ _, undefined cells print "no data".
std::string render_text(const Report& report);

// One JSON object per line: totals, table cells, bucket cells,
// significance results. Stable field and line order.
std::string render_ndjson(const Report& report);

// Self-contained SVG charts: per-scenario algorithm-class bars, and the
// keyphrase-count CTR curve.
std::string render_svg_bars(const Report& report);
std::string render_svg_curve(const Report& report);

}  // namespace relarec
