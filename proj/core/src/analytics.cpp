// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#include "relarec/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "relarec/error.hpp"

namespace relarec {

namespace {

using ordered_json = nlohmann::ordered_json;

// Table display order for the seven keyphrase combo rows.
constexpr unsigned kComboRowOrder[] = {1, 2, 3, 5, 7, 6, 4};

std::string pct(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", rate * 100.0);
  return buf;
}

int algorithm_rank(std::string_view name) {
  if (name == "terms") return 0;
  if (name == "keyphrases") return 1;
  return 2;
}

}  // namespace

ExperimentLogs ExperimentLogs::read(const std::string& deliveries_path,
                                    const std::string& clicks_path) {
  ExperimentLogs logs;

  std::ifstream din(deliveries_path);
  if (!din) throw IoError("no logs found: " + deliveries_path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(din, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json rec = ordered_json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() ||
        !rec.contains("delivery_id") || !rec.contains("scenario") ||
        !rec.contains("arm") || !rec.contains("items") ||
        !rec.contains("timestamp") || !rec["items"].is_array())
      throw DataIntegrityError("malformed delivery log line " +
                               std::to_string(line_no));
    LogDelivery d;
    d.delivery_id = rec["delivery_id"].get<std::string>();
    d.scenario = rec["scenario"].get<std::string>();
    d.arm = arm_from_name(rec["arm"].get<std::string>());
    d.fallback = rec.value("fallback", false);
    d.item_count = static_cast<std::uint32_t>(rec["items"].size());
    d.timestamp = rec["timestamp"].get<std::int64_t>();
    if (d.item_count < 1)
      throw DataIntegrityError("delivery has no items: " + d.delivery_id);
    if (d.arm == Arm::keyphrases) {
      if (rec.contains("combo") && rec["combo"].is_string())
        d.combo_mask =
            NgramCombo::from_name(rec["combo"].get<std::string>()).mask();
      if (rec.contains("count") && rec["count"].is_number())
        d.count = rec["count"].get<std::uint32_t>();
      if (rec.contains("used") && rec["used"].is_number())
        d.used = rec["used"].get<std::uint32_t>();
    }
    if (!logs.by_id.emplace(d.delivery_id, logs.deliveries.size()).second)
      throw DataIntegrityError("duplicate delivery_id: " + d.delivery_id);
    logs.deliveries.push_back(std::move(d));
  }

  std::ifstream cin_(clicks_path);
  if (cin_) {
    std::unordered_set<std::string> seen;
    line_no = 0;
    while (std::getline(cin_, line)) {
      ++line_no;
      if (line.empty()) continue;
      ordered_json rec = ordered_json::parse(line, nullptr, false);
      if (rec.is_discarded() || !rec.is_object() ||
          !rec.contains("delivery_id") || !rec.contains("rank") ||
          !rec.contains("timestamp"))
        throw DataIntegrityError("malformed click log line " +
                                 std::to_string(line_no));
      LogClick c;
      c.delivery_id = rec["delivery_id"].get<std::string>();
      c.rank = rec["rank"].get<std::uint32_t>();
      c.timestamp = rec["timestamp"].get<std::int64_t>();

      auto it = logs.by_id.find(c.delivery_id);
      if (it == logs.by_id.end())
        throw DataIntegrityError("orphan click: unknown delivery " +
                                 c.delivery_id);
      const LogDelivery& d = logs.deliveries[it->second];
      if (c.rank < 1 || c.rank > d.item_count)
        throw DataIntegrityError("click rank out of range for delivery " +
                                 c.delivery_id);
      if (!seen.insert(c.delivery_id + "#" + std::to_string(c.rank)).second)
        throw DataIntegrityError("duplicate click: delivery " + c.delivery_id +
                                 " rank " + std::to_string(c.rank));
      logs.clicks.push_back(std::move(c));
    }
  }
  return logs;
}

std::uint64_t ExperimentLogs::delivered_items() const {
  std::uint64_t total = 0;
  for (const auto& d : deliveries) total += d.item_count;
  return total;
}

std::optional<double> ctr(std::uint64_t clicks, std::uint64_t deliveries) {
  if (clicks > deliveries)
    throw DataIntegrityError("clicks exceed deliveries: " +
                             std::to_string(clicks) + " > " +
                             std::to_string(deliveries));
  if (deliveries == 0) return std::nullopt;
  return static_cast<double>(clicks) / static_cast<double>(deliveries);
}

std::string CountBuckets::label(std::uint32_t used) const {
  if (lo.size() != hi.size())
    throw ConfigError("count bucket edge lists differ in length");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (used >= lo[i] && used <= hi[i])
      return std::to_string(lo[i]) + "-" + std::to_string(hi[i]);
  return "other";
}

std::vector<std::string> CountBuckets::labels() const {
  if (lo.size() != hi.size())
    throw ConfigError("count bucket edge lists differ in length");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < lo.size(); ++i)
    out.push_back(std::to_string(lo[i]) + "-" + std::to_string(hi[i]));
  return out;
}

namespace {

SliceKey key_for(const LogDelivery& d, const SliceOptions& options) {
  SliceKey key;
  key.scenario = d.scenario;
  key.algorithm = std::string(arm_name(d.arm));
  if (d.arm == Arm::keyphrases) {
    if (options.by_combo) key.combo_mask = d.combo_mask;
    if (options.by_count_bucket)
      key.bucket = options.buckets.label(d.used.value_or(0));
  }
  return key;
}

std::string key_string(const SliceKey& key) {
  std::string s = key.scenario;
  s += '\x1f';
  s += key.algorithm;
  s += '\x1f';
  s += key.combo_mask ? std::to_string(*key.combo_mask) : "-";
  s += '\x1f';
  s += key.bucket ? *key.bucket : "-";
  return s;
}

}  // namespace

std::vector<CtrCell> slice_ctr(const ExperimentLogs& logs,
                               const SliceOptions& options) {
  std::unordered_map<std::string, CtrCell> cells;
  std::unordered_map<std::string, std::size_t> scenario_order;

  for (const auto& d : logs.deliveries) {
    scenario_order.emplace(d.scenario, scenario_order.size());
    SliceKey key = key_for(d, options);
    CtrCell& cell = cells[key_string(key)];
    cell.key = std::move(key);
    cell.deliveries += d.item_count;
  }
  for (const auto& c : logs.clicks) {
    const LogDelivery& d = logs.deliveries[logs.by_id.at(c.delivery_id)];
    cells[key_string(key_for(d, options))].clicks += 1;
  }

  std::vector<std::string> bucket_labels = options.buckets.labels();
  auto bucket_rank = [&bucket_labels](const std::optional<std::string>& b) {
    if (!b) return std::size_t{0};
    for (std::size_t i = 0; i < bucket_labels.size(); ++i)
      if (bucket_labels[i] == *b) return i + 1;
    return bucket_labels.size() + 1;  // "other" last
  };

  std::vector<CtrCell> out;
  out.reserve(cells.size());
  for (auto& [_, cell] : cells) {
    cell.rate = ctr(cell.clicks, cell.deliveries);
    out.push_back(std::move(cell));
  }
  std::sort(out.begin(), out.end(),
            [&](const CtrCell& a, const CtrCell& b) {
              const auto sa = scenario_order.at(a.key.scenario);
              const auto sb = scenario_order.at(b.key.scenario);
              if (sa != sb) return sa < sb;
              const int aa = algorithm_rank(a.key.algorithm);
              const int ab = algorithm_rank(b.key.algorithm);
              if (aa != ab) return aa < ab;
              const unsigned ca = a.key.combo_mask.value_or(0);
              const unsigned cb = b.key.combo_mask.value_or(0);
              if (ca != cb) return ca < cb;
              return bucket_rank(a.key.bucket) < bucket_rank(b.key.bucket);
            });
  return out;
}

std::vector<double> per_day_ctr(const ExperimentLogs& logs,
                                std::string_view scenario,
                                std::optional<Arm> algorithm) {
  // Clicks are attributed to the day their delivery was made, so per-day
  // clicks can never exceed per-day delivered items.
  auto matches = [&](const LogDelivery& d) {
    return d.scenario == scenario && (!algorithm || d.arm == *algorithm);
  };
  std::map<std::int64_t, std::pair<std::uint64_t, std::uint64_t>> days;
  for (const auto& d : logs.deliveries)
    if (matches(d)) days[d.timestamp / 86400].first += d.item_count;
  for (const auto& c : logs.clicks) {
    const LogDelivery& d = logs.deliveries[logs.by_id.at(c.delivery_id)];
    if (matches(d)) days[d.timestamp / 86400].second += 1;
  }
  std::vector<double> out;
  out.reserve(days.size());
  for (const auto& [day, counts] : days)
    if (counts.first > 0)
      out.push_back(static_cast<double>(counts.second) /
                    static_cast<double>(counts.first));
  return out;
}

namespace {

// Number of n-subsets of ranks {1..n+m} whose Mann-Whitney statistic is u:
// either the largest rank is in the first sample (contributing m pairs) or
// in the second. memo is laid out as (n * m_stride + m) * (max_u+1) + u.
double exact_count(int n, int m, int u, std::vector<double>& memo,
                   int m_stride, int max_u) {
  if (u < 0) return 0.0;
  if (n == 0 || m == 0) return u == 0 ? 1.0 : 0.0;
  double& slot =
      memo[(static_cast<std::size_t>(n) * m_stride + m) *
               static_cast<std::size_t>(max_u + 1) +
           u];
  if (slot >= 0.0) return slot;
  slot = exact_count(n - 1, m, u - m, memo, m_stride, max_u) +
         exact_count(n, m - 1, u, memo, m_stride, max_u);
  return slot;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

SignificanceResult wilcoxon_rank_sum(const std::vector<double>& a,
                                     const std::vector<double>& b,
                                     WilcoxonMethod method) {
  if (a.empty() || b.empty())
    throw Error("rank-sum test requires two non-empty samples");
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());

  struct Obs {
    double value;
    bool first;
  };
  std::vector<Obs> all;
  all.reserve(a.size() + b.size());
  for (double v : a) all.push_back({v, true});
  for (double v : b) all.push_back({v, false});
  std::sort(all.begin(), all.end(),
            [](const Obs& x, const Obs& y) { return x.value < y.value; });

  // Average ranks within tie groups; collect tie sizes for the variance
  // correction.
  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  bool has_ties = false;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].value == all[i].value) ++j;
    const double t = static_cast<double>(j - i);
    if (t > 1.0) {
      has_ties = true;
      tie_term += t * t * t - t;
    }
    const double avg_rank = (static_cast<double>(i + 1) +
                             static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (all[k].first) rank_sum_a += avg_rank;
    i = j;
  }
  const double u_a = rank_sum_a - static_cast<double>(n) * (n + 1) / 2.0;
  const double nm = static_cast<double>(n) * m;

  SignificanceResult result;
  result.u = u_a;

  const bool exact_ok = !has_ties;
  bool use_exact = false;
  switch (method) {
    case WilcoxonMethod::exact:
      if (!exact_ok) throw Error("exact rank-sum test requires untied samples");
      use_exact = true;
      break;
    case WilcoxonMethod::approximate:
      use_exact = false;
      break;
    case WilcoxonMethod::automatic:
      use_exact = exact_ok && n + m <= 12;
      break;
  }

  if (use_exact) {
    const int max_u = n * m;
    const int m_stride = m + 1;
    const int u_min = static_cast<int>(
        std::llround(std::min(u_a, nm - u_a)));
    std::vector<double> memo(static_cast<std::size_t>(n + 1) * m_stride *
                                 static_cast<std::size_t>(max_u + 1),
                             -1.0);
    double below = 0.0;
    for (int u = 0; u <= u_min; ++u)
      below += exact_count(n, m, u, memo, m_stride, max_u);
    const double total = binomial(n + m, n);
    result.p_value = std::min(1.0, 2.0 * below / total);
    result.method = "exact";
  } else {
    const double big_n = static_cast<double>(n + m);
    const double mean = nm / 2.0;
    const double var =
        nm / 12.0 *
        ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
    if (var <= 0.0) {
      result.p_value = 1.0;
    } else {
      double z = (std::fabs(u_a - mean) - 0.5) / std::sqrt(var);
      if (z < 0.0) z = 0.0;
      result.p_value = std::erfc(z / std::sqrt(2.0));
    }
    result.method = "normal-approximation";
  }
  return result;
}

namespace {

const CtrCell* find_cell(const std::vector<CtrCell>& cells,
                         std::string_view scenario, std::string_view algorithm,
                         std::optional<unsigned> combo_mask) {
  for (const auto& cell : cells)
    if (cell.key.scenario == scenario && cell.key.algorithm == algorithm &&
        cell.key.combo_mask == combo_mask)
      return &cell;
  return nullptr;
}

CtrCell placeholder_cell(std::string_view scenario, std::string_view algorithm,
                         std::optional<unsigned> combo_mask) {
  CtrCell cell;
  cell.key.scenario = std::string(scenario);
  cell.key.algorithm = std::string(algorithm);
  cell.key.combo_mask = combo_mask;
  return cell;
}

}  // namespace

Report build_report(const ExperimentLogs& logs, const ReportOptions& options) {
  Report report;
  report.total_items = logs.delivered_items();
  report.total_clicks = logs.clicks.size();

  for (const auto& d : logs.deliveries)
    if (std::find(report.scenarios.begin(), report.scenarios.end(),
                  d.scenario) == report.scenarios.end())
      report.scenarios.push_back(d.scenario);

  SliceOptions class_slice;
  const std::vector<CtrCell> classes = slice_ctr(logs, class_slice);
  SliceOptions combo_slice;
  combo_slice.by_combo = true;
  const std::vector<CtrCell> combos = slice_ctr(logs, combo_slice);
  SliceOptions bucket_slice;
  bucket_slice.by_count_bucket = true;
  bucket_slice.buckets = options.buckets;
  const std::vector<CtrCell> buckets = slice_ctr(logs, bucket_slice);

  auto add_row = [&](std::string label, std::string_view algorithm,
                     std::optional<unsigned> combo_mask,
                     const std::vector<CtrCell>& source) {
    ReportRow row;
    row.label = std::move(label);
    for (const auto& scenario : report.scenarios) {
      const CtrCell* cell = find_cell(source, scenario, algorithm, combo_mask);
      row.cells.push_back(cell ? *cell
                               : placeholder_cell(scenario, algorithm,
                                                  combo_mask));
    }
    report.table.push_back(std::move(row));
  };

  add_row("embeddings", "embeddings", std::nullopt, classes);
  add_row("keyphrases (overall)", "keyphrases", std::nullopt, classes);
  for (unsigned mask : kComboRowOrder)
    add_row("keyphrases (" + std::string(NgramCombo(mask).name()) + ")",
            "keyphrases", mask, combos);
  add_row("terms", "terms", std::nullopt, classes);

  // Best over every row; worst over the three algorithm classes only.
  const std::size_t class_rows[] = {0, 1, report.table.size() - 1};
  for (std::size_t s = 0; s < report.scenarios.size(); ++s) {
    int best = -1, worst = -1;
    for (std::size_t r = 0; r < report.table.size(); ++r) {
      const auto& rate = report.table[r].cells[s].rate;
      if (!rate) continue;
      if (best < 0 || *rate > *report.table[best].cells[s].rate)
        best = static_cast<int>(r);
    }
    for (std::size_t r : class_rows) {
      const auto& rate = report.table[r].cells[s].rate;
      if (!rate) continue;
      if (worst < 0 || *rate < *report.table[worst].cells[s].rate)
        worst = static_cast<int>(r);
    }
    report.best_row.push_back(best);
    report.worst_row.push_back(worst);
  }

  for (const auto& scenario : report.scenarios)
    for (std::string_view algorithm : {"terms", "keyphrases", "embeddings"}) {
      const CtrCell* cell =
          find_cell(classes, scenario, algorithm, std::nullopt);
      report.class_bars.push_back(
          cell ? *cell : placeholder_cell(scenario, algorithm, std::nullopt));
    }

  for (const auto& scenario : report.scenarios)
    for (const auto& label : options.buckets.labels()) {
      bool found = false;
      for (const auto& cell : buckets)
        if (cell.key.scenario == scenario &&
            cell.key.algorithm == "keyphrases" && cell.key.bucket == label) {
          report.count_curve.push_back(cell);
          found = true;
          break;
        }
      if (!found) {
        CtrCell cell = placeholder_cell(scenario, "keyphrases", std::nullopt);
        cell.key.bucket = label;
        report.count_curve.push_back(cell);
      }
    }

  for (std::size_t i = 0; i < report.scenarios.size(); ++i)
    for (std::size_t j = i + 1; j < report.scenarios.size(); ++j) {
      const std::string& sa = report.scenarios[i];
      const std::string& sb = report.scenarios[j];
      struct Probe {
        std::string label;
        std::optional<Arm> arm;
      };
      const Probe probes[] = {{"all", std::nullopt},
                              {"terms", Arm::terms},
                              {"keyphrases", Arm::keyphrases},
                              {"embeddings", Arm::embeddings}};
      for (const auto& probe : probes) {
        std::vector<double> xa = per_day_ctr(logs, sa, probe.arm);
        std::vector<double> xb = per_day_ctr(logs, sb, probe.arm);
        if (xa.empty() || xb.empty()) continue;
        SignificanceResult r = wilcoxon_rank_sum(xa, xb);
        r.label = probe.label + ": " + sa + " vs " + sb;
        r.sample_unit = options.sample_unit;
        report.significance.push_back(std::move(r));
      }
    }

  return report;
}

std::string render_text(const Report& report) {
  std::ostringstream out;
  out << "CTR report\n==========\n";
  std::optional<double> overall = ctr(report.total_clicks, report.total_items);
  out << "delivered items: " << report.total_items
      << "    clicks: " << report.total_clicks << "    overall CTR: "
      << (overall ? pct(*overall) : std::string("no data")) << "\n\n";

  if (report.scenarios.empty()) {
    out << "no data: the logs contain no deliveries\n";
    return out.str();
  }

  auto cell_text = [&](std::size_t row, std::size_t s) {
    const auto& rate = report.table[row].cells[s].rate;
    if (!rate) return std::string("no data");
    std::string text = pct(*rate);
    if (report.best_row[s] == static_cast<int>(row))
      text = "**" + text + "**";
    else if (report.worst_row[s] == static_cast<int>(row))
      text = "_" + text + "_";
    return text;
  };

  std::size_t label_w = std::string("algorithm").size();
  for (const auto& row : report.table)
    label_w = std::max(label_w, row.label.size());
  const std::size_t cell_w = 14;

  out << "Click-through rate by algorithm (best per scenario **bold**, "
         "worst algorithm class _italic_)\n\n";
  out << std::string(label_w, ' ');
  for (const auto& s : report.scenarios) {
    out << "  " << s;
    if (s.size() < cell_w) out << std::string(cell_w - s.size(), ' ');
  }
  out << '\n';
  for (std::size_t r = 0; r < report.table.size(); ++r) {
    const auto& row = report.table[r];
    out << row.label << std::string(label_w - row.label.size(), ' ');
    for (std::size_t s = 0; s < report.scenarios.size(); ++s) {
      const std::string text = cell_text(r, s);
      out << "  " << text;
      if (text.size() < cell_w) out << std::string(cell_w - text.size(), ' ');
    }
    out << '\n';
  }

  out << "\nKeyphrase count and click-through rate\n";
  if (report.count_curve.empty()) {
    out << "no data\n";
  } else {
    std::vector<std::string> bucket_labels;
    for (const auto& cell : report.count_curve)
      if (cell.key.scenario == report.scenarios.front())
        bucket_labels.push_back(*cell.key.bucket);
    out << std::string(label_w, ' ');
    for (const auto& b : bucket_labels) {
      out << "  " << b;
      if (b.size() < cell_w) out << std::string(cell_w - b.size(), ' ');
    }
    out << '\n';
    for (const auto& s : report.scenarios) {
      out << s << std::string(label_w - s.size(), ' ');
      for (const auto& cell : report.count_curve) {
        if (cell.key.scenario != s) continue;
        const std::string text =
            cell.rate ? pct(*cell.rate) : std::string("no data");
        out << "  " << text;
        if (text.size() < cell_w)
          out << std::string(cell_w - text.size(), ' ');
      }
      out << '\n';
    }
  }

  out << "\nSignificance tests";
  if (!report.significance.empty())
    out << " (" << report.significance.front().sample_unit << ")";
  out << '\n';
  if (report.significance.empty()) {
    out << "no data: needs at least two scenarios with deliveries\n";
  } else {
    std::size_t sig_w = 0;
    for (const auto& r : report.significance)
      sig_w = std::max(sig_w, r.label.size());
    for (const auto& r : report.significance) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "U=%-10.1f p=%-10.6g [%s]", r.u,
                    r.p_value, r.method.c_str());
      out << r.label << std::string(sig_w - r.label.size(), ' ') << "  " << buf
          << '\n';
    }
  }
  return out.str();
}

std::string render_ndjson(const Report& report) {
  std::ostringstream out;
  ordered_json totals;
  totals["type"] = "totals";
  totals["delivered_items"] = report.total_items;
  totals["clicks"] = report.total_clicks;
  std::optional<double> overall = ctr(report.total_clicks, report.total_items);
  totals["ctr"] = overall ? ordered_json(*overall) : ordered_json();
  out << totals.dump() << '\n';

  for (std::size_t s = 0; s < report.scenarios.size(); ++s)
    for (std::size_t r = 0; r < report.table.size(); ++r) {
      const CtrCell& cell = report.table[r].cells[s];
      ordered_json rec;
      rec["type"] = "table";
      rec["scenario"] = report.scenarios[s];
      rec["row"] = report.table[r].label;
      rec["algorithm"] = cell.key.algorithm;
      rec["combo"] = cell.key.combo_mask
                         ? ordered_json(std::string(
                               NgramCombo(*cell.key.combo_mask).name()))
                         : ordered_json();
      rec["deliveries"] = cell.deliveries;
      rec["clicks"] = cell.clicks;
      rec["ctr"] = cell.rate ? ordered_json(*cell.rate) : ordered_json();
      rec["best"] = report.best_row[s] == static_cast<int>(r);
      rec["worst"] = report.worst_row[s] == static_cast<int>(r);
      out << rec.dump() << '\n';
    }

  for (const auto& cell : report.count_curve) {
    ordered_json rec;
    rec["type"] = "count_bucket";
    rec["scenario"] = cell.key.scenario;
    rec["bucket"] = *cell.key.bucket;
    rec["deliveries"] = cell.deliveries;
    rec["clicks"] = cell.clicks;
    rec["ctr"] = cell.rate ? ordered_json(*cell.rate) : ordered_json();
    out << rec.dump() << '\n';
  }

  for (const auto& r : report.significance) {
    ordered_json rec;
    rec["type"] = "significance";
    rec["label"] = r.label;
    rec["u"] = r.u;
    rec["p_value"] = r.p_value;
    rec["method"] = r.method;
    rec["sample_unit"] = r.sample_unit;
    out << rec.dump() << '\n';
  }
  return out.str();
}

namespace {

std::string svg_header(int width, int height, std::string_view title) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n"
      << "<style>text{font-family:sans-serif;font-size:12px;}"
         ".t{font-size:14px;font-weight:bold;}</style>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text class=\"t\" x=\"12\" y=\"20\">" << title << "</text>\n";
  return out.str();
}

constexpr const char* kBarColors[] = {"#4a78b5", "#c05555", "#58a66a"};

}  // namespace

std::string render_svg_bars(const Report& report) {
  const int width = 720, height = 400;
  const double left = 60, right = 20, top = 40, bottom = 60;
  std::ostringstream out;
  out << svg_header(width, height, "Click-through rate by algorithm class");
  if (report.class_bars.empty()) {
    out << "<text x=\"60\" y=\"200\">no data</text>\n</svg>\n";
    return out.str();
  }

  double max_rate = 0.0;
  for (const auto& cell : report.class_bars)
    if (cell.rate) max_rate = std::max(max_rate, *cell.rate);
  if (max_rate <= 0.0) max_rate = 1e-6;
  max_rate *= 1.15;

  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const std::size_t groups = report.scenarios.size();
  const double group_w = plot_w / static_cast<double>(groups);
  const double bar_w = group_w / 4.0;

  for (int tick = 0; tick <= 4; ++tick) {
    const double frac = tick / 4.0;
    const double y = top + plot_h * (1.0 - frac);
    out << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\""
        << width - right << "\" y2=\"" << y
        << "\" stroke=\"#ddd\"/>\n<text x=\"8\" y=\"" << y + 4 << "\">"
        << pct(max_rate * frac) << "</text>\n";
  }

  const char* names[] = {"terms", "keyphrases", "embeddings"};
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t k = 0; k < 3; ++k) {
      const CtrCell& cell = report.class_bars[g * 3 + k];
      const double rate = cell.rate.value_or(0.0);
      const double h = plot_h * rate / max_rate;
      const double x = left + group_w * g + bar_w * (0.5 + k);
      out << "<rect x=\"" << x << "\" y=\"" << top + plot_h - h
          << "\" width=\"" << bar_w * 0.9 << "\" height=\"" << h
          << "\" fill=\"" << kBarColors[k] << "\"/>\n";
    }
    out << "<text x=\"" << left + group_w * (g + 0.5) << "\" y=\""
        << height - bottom + 20 << "\" text-anchor=\"middle\">"
        << report.scenarios[g] << "</text>\n";
  }
  for (std::size_t k = 0; k < 3; ++k)
    out << "<rect x=\"" << left + 120 * k << "\" y=\"" << height - 24
        << "\" width=\"12\" height=\"12\" fill=\"" << kBarColors[k]
        << "\"/>\n<text x=\"" << left + 120 * k + 18 << "\" y=\""
        << height - 14 << "\">" << names[k] << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string render_svg_curve(const Report& report) {
  const int width = 720, height = 400;
  const double left = 60, right = 20, top = 40, bottom = 60;
  std::ostringstream out;
  out << svg_header(width, height,
                    "Click-through rate by keyphrase count");
  if (report.count_curve.empty()) {
    out << "<text x=\"60\" y=\"200\">no data</text>\n</svg>\n";
    return out.str();
  }

  std::vector<std::string> bucket_labels;
  for (const auto& cell : report.count_curve)
    if (cell.key.scenario == report.scenarios.front())
      bucket_labels.push_back(*cell.key.bucket);

  double max_rate = 0.0;
  for (const auto& cell : report.count_curve)
    if (cell.rate) max_rate = std::max(max_rate, *cell.rate);
  if (max_rate <= 0.0) max_rate = 1e-6;
  max_rate *= 1.15;

  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const std::size_t nx = bucket_labels.size();
  auto x_of = [&](std::size_t i) {
    return left + plot_w * (nx > 1 ? static_cast<double>(i) / (nx - 1) : 0.5);
  };

  for (int tick = 0; tick <= 4; ++tick) {
    const double frac = tick / 4.0;
    const double y = top + plot_h * (1.0 - frac);
    out << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\""
        << width - right << "\" y2=\"" << y
        << "\" stroke=\"#ddd\"/>\n<text x=\"8\" y=\"" << y + 4 << "\">"
        << pct(max_rate * frac) << "</text>\n";
  }
  for (std::size_t i = 0; i < nx; ++i)
    out << "<text x=\"" << x_of(i) << "\" y=\"" << height - bottom + 20
        << "\" text-anchor=\"middle\">" << bucket_labels[i] << "</text>\n";

  for (std::size_t s = 0; s < report.scenarios.size(); ++s) {
    std::ostringstream points;
    std::size_t i = 0;
    for (const auto& cell : report.count_curve) {
      if (cell.key.scenario != report.scenarios[s]) continue;
      const double rate = cell.rate.value_or(0.0);
      const double y = top + plot_h * (1.0 - rate / max_rate);
      points << x_of(i) << ',' << y << ' ';
      out << "<circle cx=\"" << x_of(i) << "\" cy=\"" << y
          << "\" r=\"3\" fill=\"" << kBarColors[s % 3] << "\"/>\n";
      ++i;
    }
    out << "<polyline points=\"" << points.str()
        << "\" fill=\"none\" stroke=\"" << kBarColors[s % 3]
        << "\" stroke-width=\"2\"/>\n";
    out << "<rect x=\"" << left + 140 * s << "\" y=\"" << height - 24
        << "\" width=\"12\" height=\"12\" fill=\"" << kBarColors[s % 3]
        << "\"/>\n<text x=\"" << left + 140 * s + 18 << "\" y=\""
        << height - 14 << "\">" << report.scenarios[s] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace relarec
