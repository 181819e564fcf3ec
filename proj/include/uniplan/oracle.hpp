#pragma once

// Brute-force ground truth for small tasks: exhaustive simple-plan
// enumeration, lexicographic minima, reachable-state sweeps and exact
// goal distances.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "uniplan/error.hpp"
#include "uniplan/metrics.hpp"
#include "uniplan/search.hpp"
#include "uniplan/task.hpp"

namespace uniplan {

struct SweepResult {
  std::vector<State> states;  // BFS order, states[0] is the initial state
  bool complete = true;
};

inline SweepResult state_sweep(const Task& task, std::size_t limit = 1'000'000) {
  SweepResult out;
  std::unordered_set<State, StateHash> seen;
  auto init = task.initial_state();
  seen.insert(init);
  out.states.push_back(init);
  for (std::size_t head = 0; head < out.states.size(); ++head) {
    const State s = out.states[head];
    for (const auto& a : task.actions()) {
      if (!applicable(s, a)) continue;
      auto next = apply_unchecked(s, a);
      if (seen.count(next)) continue;
      if (out.states.size() >= limit) {
        out.complete = false;
        return out;
      }
      seen.insert(next);
      out.states.push_back(std::move(next));
    }
  }
  return out;
}

struct EnumerationLimits {
  std::size_t max_plans = 200'000;
  std::size_t max_states = 2'000'000;  // DFS node visits
  std::optional<double> max_seconds;
};

struct EnumerationResult {
  std::vector<Plan> plans;
  bool complete = true;
  std::size_t reachable_states = 0;
};

/// Every plan that never revisits a state. A goal-satisfying prefix is a plan
/// of its own and the walk continues past it.
inline EnumerationResult enumerate_simple_plans(const Task& task,
                                                const EnumerationLimits& limits = {}) {
  using Clock = std::chrono::steady_clock;
  auto start = Clock::now();
  EnumerationResult out;
  auto sweep = state_sweep(task, limits.max_states);
  out.reachable_states = sweep.states.size();
  if (!sweep.complete) out.complete = false;

  struct Frame {
    State state;
    std::size_t next_action = 0;
  };
  std::vector<Frame> stack;
  std::vector<std::size_t> path;
  std::unordered_set<State, StateHash> on_path;
  std::size_t visits = 1;

  auto record = [&] {
    if (out.plans.size() >= limits.max_plans) {
      out.complete = false;
      return false;
    }
    Plan p;
    for (auto id : path) p.steps.push_back(task.action(id).name);
    out.plans.push_back(std::move(p));
    return true;
  };

  auto init = task.initial_state();
  on_path.insert(init);
  stack.push_back({init, 0});
  if (is_goal(task, init) && !record()) return out;

  const auto& actions = task.actions();
  while (!stack.empty()) {
    auto& top = stack.back();
    bool pushed = false;
    while (top.next_action < actions.size()) {
      auto i = top.next_action++;
      if (!applicable(top.state, actions[i])) continue;
      auto next = apply_unchecked(top.state, actions[i]);
      if (on_path.count(next)) continue;
      if (++visits > limits.max_states) {
        out.complete = false;
        return out;
      }
      if (limits.max_seconds && (visits & 4095) == 0 &&
          std::chrono::duration<double>(Clock::now() - start).count() >
              *limits.max_seconds) {
        out.complete = false;
        return out;
      }
      on_path.insert(next);
      path.push_back(i);
      bool goal = is_goal(task, next);
      stack.push_back({std::move(next), 0});
      if (goal && !record()) return out;
      pushed = true;
      break;
    }
    if (!pushed) {
      on_path.erase(stack.back().state);
      stack.pop_back();
      if (!path.empty()) path.pop_back();
    }
  }
  return out;
}

using DispersionFn = std::function<std::uint64_t(std::span<const Cost>)>;

struct LexMin {
  std::vector<Plan> plans;
  Cost cost = 0;
  std::uint64_t dispersion = 0;
};

/// Plans attaining the lexicographic minimum of (cost, d) or (d, cost).
/// `fn` overrides the dispersion function (defaults to `metric`).
inline LexMin lex_min(const Task& task, std::span<const Plan> plans, Metric metric,
                      Order order, const DispersionFn& fn = {}) {
  if (plans.empty()) throw EmptyPlanSet();
  LexMin out;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> best;
  for (const auto& p : plans) {
    auto v = cost_vector(task, p);
    Cost c = 0;
    for (auto x : v) c += x;
    std::uint64_t d = fn ? fn(v) : dispersion(metric, v);
    auto key = order == Order::CostFirst ? std::pair{c, d} : std::pair{d, c};
    if (!best || key < *best) {
      best = key;
      out.plans.clear();
      out.cost = c;
      out.dispersion = d;
    }
    if (key == *best) out.plans.push_back(p);
  }
  return out;
}

/// The minimum-cost subset of all simple plans. Throws Incomplete when the
/// enumeration hit its limits.
inline std::vector<Plan> all_cost_optimal(const Task& task,
                                          const EnumerationLimits& limits = {}) {
  auto e = enumerate_simple_plans(task, limits);
  if (!e.complete) throw Incomplete("plan enumeration hit its limits");
  std::vector<Plan> out;
  std::optional<Cost> best;
  for (auto& p : e.plans) {
    auto c = plan_cost(task, p);
    if (!best || c < *best) {
      best = c;
      out.clear();
    }
    if (c == *best) out.push_back(std::move(p));
  }
  return out;
}

struct GoalDistances {
  std::vector<State> states;
  std::vector<Cost> h_star;  // kInfinity for dead ends
  bool complete = true;
};

/// Exact remaining cost h* for every reachable state, by uniform-cost search
/// backwards from the goal states over the explicit state graph.
inline GoalDistances goal_distances(const Task& task, std::size_t limit = 1'000'000) {
  GoalDistances out;
  auto sweep = state_sweep(task, limit);
  out.complete = sweep.complete;
  out.states = std::move(sweep.states);
  std::unordered_map<State, std::size_t, StateHash> id;
  for (std::size_t i = 0; i < out.states.size(); ++i) id.emplace(out.states[i], i);

  std::vector<std::vector<std::pair<std::size_t, Cost>>> reverse(out.states.size());
  for (std::size_t i = 0; i < out.states.size(); ++i) {
    for (const auto& a : task.actions()) {
      if (!applicable(out.states[i], a)) continue;
      auto it = id.find(apply_unchecked(out.states[i], a));
      if (it != id.end()) reverse[it->second].emplace_back(i, a.cost);
    }
  }
  out.h_star.assign(out.states.size(), kInfinity);
  using Entry = std::pair<Cost, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (std::size_t i = 0; i < out.states.size(); ++i) {
    if (is_goal(task, out.states[i])) {
      out.h_star[i] = 0;
      queue.emplace(0, i);
    }
  }
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d != out.h_star[v]) continue;
    for (auto [u, c] : reverse[v]) {
      if (d + c < out.h_star[u]) {
        out.h_star[u] = d + c;
        queue.emplace(d + c, u);
      }
    }
  }
  return out;
}

/// Lexicographic optimum over all plans, simple or not. Dijkstra on the
/// product of states and a metric summary (last cost and largest jump, or
/// lowest and highest cost, or the set of used costs). Every metric here is
/// a function of that summary and never decreases along a path, so the
/// cheapest path to each product node is all that matters.
/// Returns nullopt if the goal is unreachable.
inline std::optional<std::pair<Cost, std::uint64_t>> lex_opt_all_plans(
    const Task& task, Metric metric, Order order, std::size_t limit = 2'000'000) {
  // Summary (a, b): delta -> (last cost + 1 or 0, max jump);
  // range -> (min, max) with a > b meaning "no action yet";
  // count -> (bitmask over the cost alphabet, 0).
  std::vector<Cost> alphabet;
  for (const auto& a : task.actions()) alphabet.push_back(a.cost);
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  if (metric == Metric::Count && alphabet.size() > 63) {
    throw std::invalid_argument("count oracle supports at most 63 distinct costs");
  }

  using Summary = std::pair<std::uint64_t, std::uint64_t>;
  auto initial = [&]() -> Summary {
    if (metric == Metric::Range) return {kInfinity, 0};
    return {0, 0};
  };
  auto step = [&](Summary s, Cost c) -> Summary {
    switch (metric) {
      case Metric::Delta: {
        std::uint64_t jump = 0;
        if (s.first != 0) {
          Cost last = s.first - 1;
          jump = last > c ? last - c : c - last;
        }
        return {c + 1, std::max(s.second, jump)};
      }
      case Metric::Range:
        return {std::min<std::uint64_t>(s.first, c), std::max<std::uint64_t>(s.second, c)};
      case Metric::Count: {
        auto idx = std::lower_bound(alphabet.begin(), alphabet.end(), c) - alphabet.begin();
        return {s.first | (std::uint64_t{1} << idx), 0};
      }
    }
    return s;
  };
  auto value = [&](Summary s) -> std::uint64_t {
    switch (metric) {
      case Metric::Delta: return s.second;
      case Metric::Range: return s.first > s.second ? 0 : s.second - s.first;
      case Metric::Count: return static_cast<std::uint64_t>(std::popcount(s.first));
    }
    return 0;
  };

  struct Key {
    State state;
    Summary summary;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      auto h = k.state.hash();
      h ^= std::hash<std::uint64_t>{}(k.summary.first) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= std::hash<std::uint64_t>{}(k.summary.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h;
    }
  };
  std::vector<Key> keys;
  std::vector<Cost> dist;
  std::unordered_map<Key, std::size_t, KeyHash> id;
  using Entry = std::pair<Cost, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;

  auto relax = [&](Key k, Cost d) {
    auto it = id.find(k);
    if (it == id.end()) {
      if (keys.size() >= limit) throw Incomplete("product-graph oracle hit its limit");
      id.emplace(k, keys.size());
      keys.push_back(std::move(k));
      dist.push_back(d);
      queue.emplace(d, keys.size() - 1);
    } else if (d < dist[it->second]) {
      dist[it->second] = d;
      queue.emplace(d, it->second);
    }
  };
  relax({task.initial_state(), initial()}, 0);

  std::optional<std::pair<Cost, std::uint64_t>> best;
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d != dist[v]) continue;
    const Key k = keys[v];
    if (is_goal(task, k.state)) {
      auto pair = std::pair<Cost, std::uint64_t>{d, value(k.summary)};
      auto better = [&](auto x, auto y) {
        return order == Order::CostFirst ? x < y
                                         : std::pair{x.second, x.first} <
                                               std::pair{y.second, y.first};
      };
      if (!best || better(pair, *best)) best = pair;
    }
    for (const auto& a : task.actions()) {
      if (!applicable(k.state, a)) continue;
      relax({apply_unchecked(k.state, a), step(k.summary, a.cost)}, d + a.cost);
    }
  }
  return best;
}

}  // namespace uniplan
