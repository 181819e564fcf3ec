#pragma once

// Benchmark harness: runs the approach matrix on a set of tasks and derives
// coverage, time-overhead factors, dispersion suboptimality ratios and the
// metric-cross table from the raw records.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "uniplan/compiler.hpp"
#include "uniplan/metrics.hpp"
#include "uniplan/oracle.hpp"
#include "uniplan/search.hpp"
#include "uniplan/task.hpp"

namespace uniplan {

inline const std::array<std::string_view, 8> kApproaches = {
    "Pi",       "count_cd", "count_dc", "delta_cd",
    "delta_dc", "range_cd", "range_dc", "P(Pi)-oracle"};

inline const std::array<std::string_view, 6> kCompilationApproaches = {
    "count_cd", "count_dc", "delta_cd", "delta_dc", "range_cd", "range_dc"};

/// Raw-record CSV header (schema version 1).
inline constexpr std::string_view kBenchHeader =
    "instance,approach,outcome,wall_time,cost,count,delta,range,stddev,expansions";
inline constexpr std::string_view kSummaryHeader = "table,row,column,value,n";

struct BenchRecord {
  std::string instance;
  std::string approach;
  std::string outcome;  // solved | unsolvable | resource_limit | error
  double wall_time = 0.0;
  std::optional<MetricReport> metrics;
  std::optional<std::uint64_t> expansions;

  bool solved() const { return outcome == "solved" && metrics.has_value(); }
};

struct BenchOptions {
  std::vector<std::string> approaches{kApproaches.begin(), kApproaches.end()};
  double budget_seconds = 60.0;
  Heuristic heuristic = Heuristic::HMax;
  DeltaMode delta_mode = DeltaMode::Strict;
  EnumerationLimits oracle_limits{};
};

inline bool is_approach(std::string_view name) {
  return std::find(kApproaches.begin(), kApproaches.end(), name) != kApproaches.end();
}

/// Compilation approach name -> (metric, order).
inline std::pair<Metric, Order> split_approach(std::string_view name) {
  auto us = name.find('_');
  return {parse_metric(name.substr(0, us)), parse_order(name.substr(us + 1))};
}

inline BenchRecord run_approach(const Task& task, const std::string& instance,
                                const std::string& approach,
                                const BenchOptions& opt) {
  using Clock = std::chrono::steady_clock;
  BenchRecord r{instance, approach, "error", 0.0, std::nullopt, std::nullopt};
  auto start = Clock::now();
  auto stop = [&] {
    r.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  };
  SearchLimits limits;
  limits.max_seconds = opt.budget_seconds;
  try {
    if (approach == "Pi") {
      auto res = astar(task, opt.heuristic, limits);
      r.outcome = std::string(to_string(res.outcome));
      r.expansions = res.stats.expanded;
      if (res.outcome == Outcome::Solved) r.metrics = report(task, res.plan);
    } else if (approach == "P(Pi)-oracle") {
      auto lim = opt.oracle_limits;
      lim.max_seconds = opt.budget_seconds;
      auto e = enumerate_simple_plans(task, lim);
      if (!e.complete) {
        r.outcome = "resource_limit";
      } else if (e.plans.empty()) {
        r.outcome = "unsolvable";
      } else {
        // Post-processing picks the best plan per metric among the
        // cost-optimal ones.
        std::optional<MetricReport> best;
        for (const auto& p : e.plans) {
          auto m = report(task, p);
          if (!best || m.cost < best->cost) {
            best = m;
          } else if (m.cost == best->cost) {
            best->count = std::min(best->count, m.count);
            best->delta = std::min(best->delta, m.delta);
            best->range = std::min(best->range, m.range);
            best->stddev = std::min(best->stddev, m.stddev);
          }
        }
        r.outcome = "solved";
        r.metrics = best;
      }
    } else {
      auto [metric, order] = split_approach(approach);
      auto ct = compile(task, metric, order, opt.delta_mode);
      auto res = astar(ct.task, opt.heuristic, limits);
      r.outcome = std::string(to_string(res.outcome));
      r.expansions = res.stats.expanded;
      if (res.outcome == Outcome::Solved) {
        auto d = decode(res.plan, ct);
        r.metrics = report(task, d.plan);
      }
    }
  } catch (const std::exception&) {
    r.outcome = "error";
    r.metrics.reset();
  }
  stop();
  return r;
}

/// One record per requested approach, in request order.
inline std::vector<BenchRecord> run_instance(const Task& task, const std::string& instance,
                                             const BenchOptions& opt) {
  std::vector<BenchRecord> out;
  for (const auto& a : opt.approaches) out.push_back(run_approach(task, instance, a, opt));
  return out;
}

/// Runs instances on `jobs` worker threads; records come back in instance
/// order regardless of scheduling.
inline std::vector<BenchRecord> run_bench(
    const std::vector<std::pair<std::string, std::optional<Task>>>& instances,
    const BenchOptions& opt, unsigned jobs = 1) {
  std::vector<std::vector<BenchRecord>> per(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next++; i < instances.size(); i = next++) {
      const auto& [id, task] = instances[i];
      if (task) {
        per[i] = run_instance(*task, id, opt);
      } else {
        for (const auto& a : opt.approaches) {
          per[i].push_back({id, a, "error", 0.0, std::nullopt, std::nullopt});
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < std::max(1U, jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<BenchRecord> out;
  for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
  return out;
}

namespace detail {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace detail

inline std::string to_csv(const std::vector<BenchRecord>& records) {
  std::string out(kBenchHeader);
  out += "\n";
  for (const auto& r : records) {
    out += detail::csv_field(r.instance) + "," + detail::csv_field(r.approach) + "," +
           r.outcome + "," + detail::fixed(r.wall_time, 6) + ",";
    if (r.metrics) {
      const auto& m = *r.metrics;
      out += std::to_string(m.cost) + "," + std::to_string(m.count) + "," +
             std::to_string(m.delta) + "," + std::to_string(m.range) + "," +
             detail::fixed(m.stddev, 4);
    } else {
      out += ",,,,";
    }
    out += ",";
    if (r.expansions) out += std::to_string(*r.expansions);
    out += "\n";
  }
  return out;
}

/// Inverse of to_csv (stddev comes back rounded to 4 digits).
inline std::vector<BenchRecord> parse_bench_csv(std::string_view text) {
  std::vector<BenchRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      if (line != kBenchHeader) throw std::invalid_argument("unexpected bench CSV header");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    auto f = detail::split_csv_line(line);
    if (f.size() != 10) throw std::invalid_argument("bench CSV row needs 10 fields");
    BenchRecord r;
    r.instance = f[0];
    r.approach = f[1];
    r.outcome = f[2];
    r.wall_time = std::stod(f[3]);
    if (!f[4].empty()) {
      MetricReport m;
      m.cost = std::stoull(f[4]);
      m.count = std::stoull(f[5]);
      m.delta = std::stoull(f[6]);
      m.range = std::stoull(f[7]);
      m.stddev = std::stod(f[8]);
      r.metrics = m;
    }
    if (!f[9].empty()) r.expansions = std::stoull(f[9]);
    out.push_back(std::move(r));
  }
  return out;
}

struct SummaryRow {
  std::string table;
  std::string row;
  std::string column;
  double value = 0.0;
  std::size_t n = 0;
};

namespace detail {

inline double metric_value(const MetricReport& m, std::string_view metric) {
  if (metric == "count") return static_cast<double>(m.count);
  if (metric == "delta") return static_cast<double>(m.delta);
  if (metric == "range") return static_cast<double>(m.range);
  return m.stddev;
}

/// d / d_best with 0/0 = 1; nullopt when only the denominator is 0.
inline std::optional<double> ratio(double d, double best) {
  constexpr double kEps = 1e-9;
  if (best < kEps) return d < kEps ? std::optional<double>(1.0) : std::nullopt;
  return d / best;
}

}  // namespace detail

/// Derived tables, a pure function of the records:
///   coverage       solved instances per approach
///   overhead       mean T(X)/T(Pi) over instances every approach solved
///   suboptimality  mean d(pi_Pi)/d(pi_X) for compilation X and its own metric
///   heatmap        for each dispersion-first compilation, mean ratio of each
///                  metric to the best value any compilation found
/// Times are floored at 1 microsecond before dividing.
inline std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records) {
  std::map<std::string, std::map<std::string, const BenchRecord*>> by_instance;
  std::vector<std::string> approaches;
  for (const auto& r : records) {
    by_instance[r.instance][r.approach] = &r;
    if (std::find(approaches.begin(), approaches.end(), r.approach) == approaches.end()) {
      approaches.push_back(r.approach);
    }
  }
  std::vector<std::string> ordered;
  for (auto a : kApproaches) {
    if (std::find(approaches.begin(), approaches.end(), a) != approaches.end()) {
      ordered.emplace_back(a);
    }
  }

  std::vector<SummaryRow> out;
  auto solved = [&](const std::string& inst, std::string_view a) -> const BenchRecord* {
    auto& m = by_instance[inst];
    auto it = m.find(std::string(a));
    return it != m.end() && it->second->solved() ? it->second : nullptr;
  };

  for (const auto& a : ordered) {
    std::size_t n = 0;
    for (const auto& [inst, m] : by_instance) n += solved(inst, a) != nullptr;
    out.push_back({"coverage", a, "solved", static_cast<double>(n), by_instance.size()});
  }

  constexpr double kMinTime = 1e-6;
  if (std::find(ordered.begin(), ordered.end(), "Pi") != ordered.end()) {
    std::vector<std::string> common;
    for (const auto& [inst, m] : by_instance) {
      bool all = std::all_of(ordered.begin(), ordered.end(),
                             [&](const auto& a) { return solved(inst, a) != nullptr; });
      if (all) common.push_back(inst);
    }
    for (const auto& a : ordered) {
      if (a == "Pi") continue;
      double sum = 0;
      for (const auto& inst : common) {
        sum += std::max(solved(inst, a)->wall_time, kMinTime) /
               std::max(solved(inst, "Pi")->wall_time, kMinTime);
      }
      out.push_back({"overhead", a, "time_factor",
                     common.empty() ? 0.0 : sum / static_cast<double>(common.size()),
                     common.size()});
    }

    for (const auto& a : ordered) {
      if (std::find(kCompilationApproaches.begin(), kCompilationApproaches.end(), a) ==
          kCompilationApproaches.end()) {
        continue;
      }
      auto metric = std::string(to_string(split_approach(a).first));
      double sum = 0;
      std::size_t n = 0;
      for (const auto& [inst, m] : by_instance) {
        auto* x = solved(inst, a);
        auto* pi = solved(inst, "Pi");
        if (!x || !pi) continue;
        auto r = detail::ratio(detail::metric_value(*pi->metrics, metric),
                               detail::metric_value(*x->metrics, metric));
        if (!r) continue;
        sum += *r;
        ++n;
      }
      out.push_back({"suboptimality", a, metric, n ? sum / static_cast<double>(n) : 0.0, n});
    }
  }

  static constexpr std::array<std::string_view, 3> kRows = {"count_dc", "delta_dc",
                                                            "range_dc"};
  static constexpr std::array<std::string_view, 4> kColumns = {"count", "delta", "range",
                                                               "stddev"};
  bool have_rows = std::all_of(kRows.begin(), kRows.end(), [&](auto r) {
    return std::find(ordered.begin(), ordered.end(), r) != ordered.end();
  });
  if (have_rows) {
    std::vector<std::string> common;
    for (const auto& [inst, m] : by_instance) {
      bool all = std::all_of(kRows.begin(), kRows.end(),
                             [&](auto a) { return solved(inst, a) != nullptr; });
      if (all) common.push_back(inst);
    }
    for (auto row : kRows) {
      for (auto col : kColumns) {
        double sum = 0;
        std::size_t n = 0;
        for (const auto& inst : common) {
          double best = -1;
          for (auto a : kCompilationApproaches) {
            if (auto* r = solved(inst, a)) {
              double v = detail::metric_value(*r->metrics, col);
              if (best < 0 || v < best) best = v;
            }
          }
          auto r = detail::ratio(detail::metric_value(*solved(inst, row)->metrics, col), best);
          if (!r) continue;
          sum += *r;
          ++n;
        }
        out.push_back({"heatmap", std::string(row), std::string(col),
                       n ? sum / static_cast<double>(n) : 0.0, n});
      }
    }
  }
  return out;
}

inline std::string to_csv(const std::vector<SummaryRow>& rows) {
  std::string out(kSummaryHeader);
  out += "\n";
  for (const auto& r : rows) {
    out += r.table + "," + detail::csv_field(r.row) + "," + r.column + "," +
           detail::fixed(r.value, 4) + "," + std::to_string(r.n) + "\n";
  }
  return out;
}

}  // namespace uniplan
