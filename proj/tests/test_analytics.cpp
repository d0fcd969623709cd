// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "relarec/analytics.hpp"
#include "relarec/error.hpp"
#include "relarec/rng.hpp"

using namespace relarec;
using ordered_json = nlohmann::ordered_json;

namespace {

// Writes delivery/click NDJSON fixtures in the engine's on-disk format.
class LogWriter {
 public:
  explicit LogWriter(const std::string& stem)
      : deliveries_path_(stem + ".deliveries.log"),
        clicks_path_(stem + ".clicks.log") {
    std::remove(deliveries_path_.c_str());
    std::remove(clicks_path_.c_str());
    deliveries_.open(deliveries_path_);
    clicks_.open(clicks_path_);
  }

  // Returns the delivery_id. combo/count/used apply to the keyphrase arm.
  std::string delivery(const std::string& scenario, const std::string& arm,
                       int items, std::int64_t timestamp,
                       const std::string& combo = "",
                       std::optional<std::uint32_t> used = std::nullopt,
                       std::optional<std::uint32_t> count = std::nullopt,
                       bool fallback = false) {
    ordered_json rec;
    const std::string id = "d" + std::to_string(next_++);
    rec["delivery_id"] = id;
    rec["scenario"] = scenario;
    rec["query_doc_id"] = "q";
    rec["arm"] = arm;
    if (arm == "keyphrases") {
      rec["combo"] = combo.empty() ? "uni" : combo;
      rec["count"] = count ? ordered_json(*count) : ordered_json();
      rec["used"] = used ? ordered_json(*used) : ordered_json(1);
    }
    rec["fallback"] = fallback;
    std::vector<std::string> item_ids;
    for (int i = 0; i < items; ++i)
      item_ids.push_back("x" + std::to_string(i));
    rec["items"] = item_ids;
    rec["timestamp"] = timestamp;
    deliveries_ << rec.dump() << '\n';
    return id;
  }

  void click(const std::string& delivery_id, std::uint32_t rank,
             std::int64_t timestamp = 0) {
    ordered_json rec;
    rec["delivery_id"] = delivery_id;
    rec["rank"] = rank;
    rec["timestamp"] = timestamp;
    clicks_ << rec.dump() << '\n';
  }

  void raw_delivery_line(const std::string& line) { deliveries_ << line << '\n'; }

  ExperimentLogs read() {
    deliveries_.flush();
    clicks_.flush();
    return ExperimentLogs::read(deliveries_path_, clicks_path_);
  }

  const std::string& deliveries_path() const { return deliveries_path_; }
  const std::string& clicks_path() const { return clicks_path_; }

 private:
  std::string deliveries_path_, clicks_path_;
  std::ofstream deliveries_, clicks_;
  int next_ = 1;
};

// Brute-force two-sided rank-sum p-value: enumerate every way to assign the
// combined distinct values to the first sample.
double brute_force_p(const std::vector<double>& a,
                     const std::vector<double>& b) {
  const int n = static_cast<int>(a.size());
  const int total = n + static_cast<int>(b.size());
  std::vector<double> all(a);
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());

  auto u_of = [&](const std::vector<double>& xs,
                  const std::vector<double>& ys) {
    double u = 0;
    for (double x : xs)
      for (double y : ys) u += x > y ? 1.0 : 0.0;
    return u;
  };
  const double u_obs = u_of(a, b);
  const double nm = static_cast<double>(a.size()) * b.size();
  const double u_min = std::min(u_obs, nm - u_obs);

  std::vector<int> pick(total, 0);
  std::fill(pick.end() - n, pick.end(), 1);
  double at_or_below = 0, count = 0;
  do {
    std::vector<double> xs, ys;
    for (int i = 0; i < total; ++i)
      (pick[i] ? xs : ys).push_back(all[i]);
    if (u_of(xs, ys) <= u_min + 1e-12) at_or_below += 1;
    count += 1;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return std::min(1.0, 2.0 * at_or_below / count);
}

}  // namespace

TEST_SUITE_BEGIN("analytics");

TEST_CASE("ctr arithmetic") {
  CHECK(*ctr(9, 1000) == doctest::Approx(0.009).epsilon(1e-15));
  CHECK(*ctr(0, 500) == 0.0);
  CHECK_FALSE(ctr(0, 0).has_value());
  CHECK_THROWS_AS(ctr(3, 2), DataIntegrityError);

  // 33,089 clicks over 33.5M deliveries prints as 0.10% at two decimals.
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f%%", *ctr(33089, 33500000) * 100.0);
  CHECK(std::string(buf) == "0.10%");

  // Scale invariance: ctr(kc, kd) == ctr(c, d).
  for (std::uint64_t k : {2ull, 7ull, 1000ull})
    CHECK(*ctr(9 * k, 1000 * k) == *ctr(9, 1000));
}

TEST_CASE("log reading validates structure and joins") {
  SUBCASE("missing delivery log") {
    CHECK_THROWS_WITH_AS(
        ExperimentLogs::read("does_not_exist.log", "also_missing.log"),
        "no logs found: does_not_exist.log", IoError);
  }
  SUBCASE("well-formed round trip") {
    LogWriter w("an_ok");
    auto d1 = w.delivery("s1", "terms", 6, 100);
    auto d2 = w.delivery("s1", "keyphrases", 3, 200, "uni+bi", 5, 9);
    w.click(d1, 1, 150);
    w.click(d2, 3, 250);
    ExperimentLogs logs = w.read();
    REQUIRE(logs.deliveries.size() == 2);
    REQUIRE(logs.clicks.size() == 2);
    CHECK(logs.delivered_items() == 9);
    CHECK(logs.deliveries[0].arm == Arm::terms);
    CHECK_FALSE(logs.deliveries[0].combo_mask.has_value());
    CHECK(logs.deliveries[1].arm == Arm::keyphrases);
    CHECK(*logs.deliveries[1].combo_mask == 3);  // uni+bi
    CHECK(*logs.deliveries[1].used == 5);
    CHECK(*logs.deliveries[1].count == 9);
    CHECK(logs.deliveries[1].timestamp == 200);
    CHECK(logs.by_id.at(d2) == 1);
  }
  SUBCASE("missing click log reads as zero clicks") {
    LogWriter w("an_noclicks");
    w.delivery("s1", "terms", 2, 0);
    ExperimentLogs logs =
        ExperimentLogs::read(w.deliveries_path(), "no_such_clicks.log");
    CHECK(logs.clicks.empty());
  }
  SUBCASE("malformed line is rejected with its number") {
    LogWriter w("an_bad");
    w.delivery("s1", "terms", 2, 0);
    w.raw_delivery_line("{not json");
    CHECK_THROWS_WITH_AS(w.read(), "malformed delivery log line 2",
                         DataIntegrityError);
  }
  SUBCASE("duplicate delivery ids are rejected") {
    LogWriter w("an_dup");
    w.delivery("s1", "terms", 2, 0);
    w.raw_delivery_line(
        R"({"delivery_id":"d1","scenario":"s1","query_doc_id":"q","arm":"terms","fallback":false,"items":["x"],"timestamp":0})");
    CHECK_THROWS_AS(w.read(), DataIntegrityError);
  }
  SUBCASE("empty item list is rejected") {
    LogWriter w("an_empty_items");
    w.delivery("s1", "terms", 0, 0);
    CHECK_THROWS_AS(w.read(), DataIntegrityError);
  }
  SUBCASE("orphan click names the delivery") {
    LogWriter w("an_orphan");
    w.delivery("s1", "terms", 2, 0);
    w.click("d77", 1);
    CHECK_THROWS_WITH_AS(w.read(), "orphan click: unknown delivery d77",
                         DataIntegrityError);
  }
  SUBCASE("click rank outside the item range") {
    LogWriter w("an_rank");
    auto d1 = w.delivery("s1", "terms", 2, 0);
    w.click(d1, 3);
    CHECK_THROWS_AS(w.read(), DataIntegrityError);
  }
  SUBCASE("duplicate click pair") {
    LogWriter w("an_dupclick");
    auto d1 = w.delivery("s1", "terms", 2, 0);
    w.click(d1, 1);
    w.click(d1, 1);
    CHECK_THROWS_AS(w.read(), DataIntegrityError);
  }
}

TEST_CASE("slices conserve totals and attribute fallbacks to terms") {
  LogWriter w("an_slices");
  auto d1 = w.delivery("s1", "terms", 6, 0);
  auto d2 = w.delivery("s1", "terms", 4, 0, "", std::nullopt, std::nullopt,
                       /*fallback=*/true);
  auto d3 = w.delivery("s1", "keyphrases", 6, 0, "tri", 2);
  auto d4 = w.delivery("s2", "embeddings", 5, 0);
  w.click(d1, 1);
  w.click(d2, 2);
  w.click(d3, 6);
  w.click(d4, 5);
  ExperimentLogs logs = w.read();

  for (bool by_combo : {false, true})
    for (bool by_bucket : {false, true}) {
      SliceOptions options;
      options.by_combo = by_combo;
      options.by_count_bucket = by_bucket;
      auto cells = slice_ctr(logs, options);
      std::uint64_t items = 0, clicks = 0;
      for (const auto& cell : cells) {
        items += cell.deliveries;
        clicks += cell.clicks;
      }
      CHECK(items == logs.delivered_items());
      CHECK(clicks == logs.clicks.size());
    }

  auto cells = slice_ctr(logs, {});
  // s1 first (first appearance), arms in terms/keyphrases/embeddings order.
  REQUIRE(cells.size() == 3);
  CHECK(cells[0].key.scenario == "s1");
  CHECK(cells[0].key.algorithm == "terms");
  CHECK(cells[0].deliveries == 10);  // fallback delivery counted under terms
  CHECK(cells[0].clicks == 2);
  CHECK(*cells[0].rate == doctest::Approx(0.2));
  CHECK(cells[1].key.algorithm == "keyphrases");
  CHECK(cells[1].deliveries == 6);
  CHECK(cells[2].key.scenario == "s2");
  CHECK(cells[2].key.algorithm == "embeddings");
}

TEST_CASE("combo and count-bucket splits") {
  LogWriter w("an_buckets");
  w.delivery("s1", "keyphrases", 6, 0, "uni", 2);
  w.delivery("s1", "keyphrases", 6, 0, "uni", 3);
  w.delivery("s1", "keyphrases", 6, 0, "tri", 5);
  w.delivery("s1", "keyphrases", 6, 0, "uni+bi+tri", 9);
  w.delivery("s1", "keyphrases", 6, 0, "bi", 15);
  w.delivery("s1", "keyphrases", 6, 0, "bi", 25);  // out of range -> other
  w.delivery("s1", "terms", 6, 0);
  ExperimentLogs logs = w.read();

  SliceOptions by_combo;
  by_combo.by_combo = true;
  auto combo_cells = slice_ctr(logs, by_combo);
  std::vector<unsigned> masks;
  for (const auto& cell : combo_cells)
    if (cell.key.combo_mask) masks.push_back(*cell.key.combo_mask);
  CHECK(masks == std::vector<unsigned>{1, 2, 4, 7});  // uni, bi, tri, all

  SliceOptions by_bucket;
  by_bucket.by_count_bucket = true;
  auto bucket_cells = slice_ctr(logs, by_bucket);
  std::vector<std::string> buckets;
  for (const auto& cell : bucket_cells)
    if (cell.key.bucket) buckets.push_back(*cell.key.bucket);
  CHECK(buckets ==
        std::vector<std::string>{"1-3", "4-7", "8-11", "12-19", "other"});
  for (const auto& cell : bucket_cells) {
    if (!cell.key.bucket) continue;
    if (*cell.key.bucket == "1-3") CHECK(cell.deliveries == 12);
    if (*cell.key.bucket == "other") CHECK(cell.deliveries == 6);
  }
}

TEST_CASE("per-day samples use the delivery's day") {
  LogWriter w("an_days");
  auto d1 = w.delivery("s1", "terms", 4, 10);            // day 0
  auto d2 = w.delivery("s1", "terms", 4, 86400 + 50);    // day 1
  w.delivery("s1", "keyphrases", 2, 86400 + 60, "uni", 1);
  w.click(d1, 1, 20);
  w.click(d2, 1, 2 * 86400 + 5);  // clicked a day later; counts for day 1
  w.click(d2, 2, 86400 + 70);
  ExperimentLogs logs = w.read();

  auto terms_days = per_day_ctr(logs, "s1", Arm::terms);
  REQUIRE(terms_days.size() == 2);
  CHECK(terms_days[0] == doctest::Approx(0.25));
  CHECK(terms_days[1] == doctest::Approx(0.5));

  auto pooled = per_day_ctr(logs, "s1", std::nullopt);
  REQUIRE(pooled.size() == 2);
  CHECK(pooled[1] == doctest::Approx(2.0 / 6.0));

  CHECK(per_day_ctr(logs, "nope", std::nullopt).empty());
}

TEST_CASE("rank-sum golden cases") {
  SignificanceResult r = wilcoxon_rank_sum({1, 2, 3}, {4, 5, 6});
  CHECK(r.u == 0.0);
  CHECK(r.p_value == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(r.method == "exact");

  SignificanceResult tied = wilcoxon_rank_sum({5, 5}, {5, 5});
  CHECK(tied.p_value == 1.0);
  CHECK(tied.method == "normal-approximation");

  SignificanceResult flipped = wilcoxon_rank_sum({4, 5, 6}, {1, 2, 3});
  CHECK(flipped.u == 9.0);  // n*m - 0
  CHECK(flipped.p_value == doctest::Approx(0.1).epsilon(1e-12));

  CHECK(wilcoxon_rank_sum({1, 2}, {3, 4}).u == 0.0);
  CHECK_THROWS_AS(wilcoxon_rank_sum({}, {1.0}), Error);
  CHECK_THROWS_AS(wilcoxon_rank_sum({1.0}, {}), Error);
}

TEST_CASE("exact p-values match brute-force enumeration") {
  Rng rng(404);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    const int m = 2 + static_cast<int>(rng.below(4));
    std::vector<double> values(n + m);
    std::iota(values.begin(), values.end(), 1.0);
    // Shuffle distinct values into the two samples.
    for (std::size_t i = values.size(); i > 1; --i)
      std::swap(values[i - 1], values[rng.below(i)]);
    std::vector<double> a(values.begin(), values.begin() + n);
    std::vector<double> b(values.begin() + n, values.end());

    SignificanceResult r = wilcoxon_rank_sum(a, b);
    REQUIRE(r.method == "exact");
    CHECK(r.p_value == doctest::Approx(brute_force_p(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("p-values are invariant under monotone transforms") {
  Rng rng(505);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a(5), b(6);
    for (auto& x : a) x = rng.gaussian();
    for (auto& x : b) x = 0.5 + rng.gaussian();
    auto transform = [](std::vector<double> v) {
      for (auto& x : v) x = std::exp(3.0 * x) + 7.0;
      return v;
    };
    SignificanceResult plain = wilcoxon_rank_sum(a, b);
    SignificanceResult mapped = wilcoxon_rank_sum(transform(a), transform(b));
    CHECK(plain.p_value == mapped.p_value);
    CHECK(plain.u == mapped.u);
  }
}

TEST_CASE("normal approximation tracks the exact test on 6-vs-6 samples") {
  Rng rng(606);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(6), b(6);
    for (auto& x : a) x = rng.gaussian();
    for (auto& x : b) x = 0.8 * rng.gaussian() + 0.3;
    SignificanceResult exact =
        wilcoxon_rank_sum(a, b, WilcoxonMethod::exact);
    SignificanceResult approx =
        wilcoxon_rank_sum(a, b, WilcoxonMethod::approximate);
    CHECK(std::fabs(exact.p_value - approx.p_value) <= 0.02);
  }
}

TEST_CASE("report fixture with designed best and worst cells") {
  // Two scenarios, 50 deliveries of 6 items per cell (300 items/cell), with
  // click counts chosen so that in "left" the trigram keyphrase row beats
  // every other row while terms is the weakest algorithm class, and in
  // "right" terms wins while embeddings is weakest.
  LogWriter w("an_report");
  struct Cell {
    const char* combo;  // nullptr for the terms/embeddings arms
    int clicks;
  };
  const int per_cell = 50;
  auto fill = [&](const std::string& scenario, int terms_clicks,
                  int embeddings_clicks, const std::vector<Cell>& combos) {
    auto emit = [&](const std::string& arm, const char* combo, int clicks) {
      const std::string combo_name = combo ? combo : "";
      std::optional<std::uint32_t> used;
      if (combo) used = 2;
      int due = clicks;
      for (int i = 0; i < per_cell; ++i) {
        auto id = w.delivery(scenario, arm, 6, 100 + i, combo_name, used);
        for (int r = 1; r <= 6 && due > 0; ++r, --due) w.click(id, r);
      }
      REQUIRE(due == 0);
    };
    emit("terms", nullptr, terms_clicks);
    emit("embeddings", nullptr, embeddings_clicks);
    for (const auto& cell : combos) emit("keyphrases", cell.combo, cell.clicks);
  };
  fill("left", /*terms=*/3, /*embeddings=*/6,
       {{"uni", 8},
        {"bi", 7},
        {"uni+bi", 5},
        {"uni+tri", 9},
        {"uni+bi+tri", 6},
        {"bi+tri", 12},
        {"tri", 21}});
  fill("right", /*terms=*/9, /*embeddings=*/1,
       {{"uni", 2},
        {"bi", 2},
        {"uni+bi", 1},
        {"uni+tri", 2},
        {"uni+bi+tri", 1},
        {"bi+tri", 1},
        {"tri", 1}});

  ExperimentLogs logs = w.read();
  Report report = build_report(logs);

  REQUIRE(report.scenarios == std::vector<std::string>{"left", "right"});
  REQUIRE(report.table.size() == 10);
  CHECK(report.table[0].label == "embeddings");
  CHECK(report.table[1].label == "keyphrases (overall)");
  CHECK(report.table[2].label == "keyphrases (uni)");
  CHECK(report.table[3].label == "keyphrases (bi)");
  CHECK(report.table[4].label == "keyphrases (uni+bi)");
  CHECK(report.table[5].label == "keyphrases (uni+tri)");
  CHECK(report.table[6].label == "keyphrases (uni+bi+tri)");
  CHECK(report.table[7].label == "keyphrases (bi+tri)");
  CHECK(report.table[8].label == "keyphrases (tri)");
  CHECK(report.table[9].label == "terms");

  // Rates reproduce the designed click counts exactly.
  CHECK(*report.table[9].cells[0].rate == 3.0 / 300.0);   // left terms
  CHECK(*report.table[8].cells[0].rate == 21.0 / 300.0);  // left tri

  // keyphrases (overall) aggregates the seven combo cells.
  std::uint64_t combo_items = 0, combo_clicks = 0;
  for (int r = 2; r <= 8; ++r) {
    combo_items += report.table[r].cells[0].deliveries;
    combo_clicks += report.table[r].cells[0].clicks;
  }
  CHECK(report.table[1].cells[0].deliveries == combo_items);
  CHECK(report.table[1].cells[0].clicks == combo_clicks);
  CHECK(combo_items == 7 * per_cell * 6);

  // left: best = trigram keyphrases over all rows, worst class = terms.
  CHECK(report.best_row[0] == 8);
  CHECK(report.worst_row[0] == 9);
  // right: best = terms, worst class = embeddings.
  CHECK(report.best_row[1] == 9);
  CHECK(report.worst_row[1] == 0);

  const std::string text = render_text(report);
  CHECK(text.find("**7.00%**") != std::string::npos);  // left best: tri
  CHECK(text.find("_1.00%_") != std::string::npos);    // left worst: terms
  CHECK(text.find("**3.00%**") != std::string::npos);  // right best: terms
  CHECK(text.find("_0.33%_") != std::string::npos);    // right worst: embeddings

  const std::string ndjson = render_ndjson(report);
  std::istringstream lines(ndjson);
  std::string line;
  std::size_t count = 0, best_marks = 0;
  while (std::getline(lines, line)) {
    auto rec = ordered_json::parse(line);  // every line parses
    CHECK(rec.contains("type"));
    if (rec["type"] == "table" && rec["best"] == true) ++best_marks;
    ++count;
  }
  CHECK(best_marks == 2);  // one best per scenario
  // totals + 20 table cells + 8 bucket cells + 4 significance rows
  CHECK(count == 1 + 20 + 8 + report.significance.size());

  // Deterministic rendering.
  CHECK(render_text(report) == text);
  CHECK(render_ndjson(build_report(logs)) == ndjson);

  const std::string bars = render_svg_bars(report);
  CHECK(bars.find("<svg") != std::string::npos);
  CHECK(bars.find("<rect") != std::string::npos);
  const std::string curve = render_svg_curve(report);
  CHECK(curve.find("polyline") != std::string::npos);
}

TEST_CASE("significance section compares scenarios per algorithm") {
  LogWriter w("an_sig");
  Rng rng(7);
  // 14 days, two scenarios, terms twice as clickable in "hot".
  for (int day = 0; day < 14; ++day)
    for (int i = 0; i < 40; ++i) {
      auto hot = w.delivery("hot", "terms", 6, day * 86400 + i);
      auto cold = w.delivery("cold", "terms", 6, day * 86400 + i);
      for (int r = 1; r <= 6; ++r) {
        if (rng.uniform01() < 0.30) w.click(hot, r);
        if (rng.uniform01() < 0.15) w.click(cold, r);
      }
    }
  ExperimentLogs logs = w.read();
  Report report = build_report(logs);

  bool found = false;
  for (const auto& sig : report.significance) {
    if (sig.label == "terms: hot vs cold") {
      found = true;
      CHECK(sig.p_value < 0.05);
      CHECK(sig.sample_unit == "per-day CTR");
    }
    CHECK(sig.p_value >= 0.0);
    CHECK(sig.p_value <= 1.0);
  }
  CHECK(found);
}

TEST_CASE("empty logs produce an explicit no-data report") {
  LogWriter w("an_nothing");
  ExperimentLogs logs = w.read();
  CHECK(logs.deliveries.empty());
  Report report = build_report(logs);
  CHECK(report.scenarios.empty());
  CHECK(report.total_items == 0);
  const std::string text = render_text(report);
  CHECK(text.find("no data") != std::string::npos);
  const std::string svg = render_svg_bars(report);
  CHECK(svg.find("no data") != std::string::npos);
}

TEST_SUITE_END();
