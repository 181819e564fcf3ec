#pragma once

// Dispersion metrics over a plan's action-cost vector.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "uniplan/error.hpp"
#include "uniplan/task.hpp"

namespace uniplan {

enum class Metric { Count, Delta, Range };
enum class Order { CostFirst, DispersionFirst };

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::Count: return "count";
    case Metric::Delta: return "delta";
    case Metric::Range: return "range";
  }
  return "?";
}

inline std::string_view to_string(Order o) {
  return o == Order::CostFirst ? "cd" : "dc";
}

inline Metric parse_metric(std::string_view s) {
  if (s == "count") return Metric::Count;
  if (s == "delta") return Metric::Delta;
  if (s == "range") return Metric::Range;
  throw std::invalid_argument("unknown metric '" + std::string(s) + "'");
}

inline Order parse_order(std::string_view s) {
  if (s == "cd") return Order::CostFirst;
  if (s == "dc") return Order::DispersionFirst;
  throw std::invalid_argument("unknown order '" + std::string(s) + "'");
}

/// Number of distinct costs.
inline std::uint64_t metric_count(std::span<const Cost> v) {
  std::unordered_set<Cost> seen(v.begin(), v.end());
  return seen.size();
}

/// Largest jump between adjacent costs; 0 for fewer than two actions.
inline std::uint64_t metric_delta(std::span<const Cost> v) {
  Cost best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    best = std::max(best, v[i] > v[i - 1] ? v[i] - v[i - 1] : v[i - 1] - v[i]);
  }
  return best;
}

/// max - min; 0 for fewer than two actions.
inline std::uint64_t metric_range(std::span<const Cost> v) {
  if (v.empty()) return 0;
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

/// Population standard deviation. Reported only; no compilation targets it.
inline double metric_stddev(std::span<const Cost> v) {
  if (v.empty()) throw EmptyVector();
  double mean = 0;
  for (auto c : v) mean += static_cast<double>(c);
  mean /= static_cast<double>(v.size());
  double acc = 0;
  for (auto c : v) {
    double d = static_cast<double>(c) - mean;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(v.size()));
}

inline std::uint64_t dispersion(Metric m, std::span<const Cost> v) {
  switch (m) {
    case Metric::Count: return metric_count(v);
    case Metric::Delta: return metric_delta(v);
    case Metric::Range: return metric_range(v);
  }
  return 0;
}

/// All four metrics of one plan, as reported by the CLI and the bench.
struct MetricReport {
  Cost cost = 0;
  std::uint64_t count = 0;
  std::uint64_t delta = 0;
  std::uint64_t range = 0;
  double stddev = 0.0;  // 0 for the empty plan
};

inline MetricReport report(std::span<const Cost> v) {
  MetricReport r;
  for (auto c : v) r.cost += c;
  r.count = metric_count(v);
  r.delta = metric_delta(v);
  r.range = metric_range(v);
  r.stddev = v.empty() ? 0.0 : metric_stddev(v);
  return r;
}

inline MetricReport report(const Task& task, const Plan& plan) {
  auto v = cost_vector(task, plan);
  return report(v);
}

}  // namespace uniplan
