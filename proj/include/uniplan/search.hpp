#pragma once

// Optimal forward search: A* with a blind or h^max heuristic.

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "uniplan/error.hpp"
#include "uniplan/task.hpp"

namespace uniplan {

inline constexpr Cost kInfinity = std::numeric_limits<Cost>::max();

enum class Heuristic { Blind, HMax };

inline std::string_view to_string(Heuristic h) {
  return h == Heuristic::Blind ? "blind" : "hmax";
}

inline Heuristic parse_heuristic(std::string_view s) {
  if (s == "blind") return Heuristic::Blind;
  if (s == "hmax") return Heuristic::HMax;
  throw std::invalid_argument("unknown heuristic '" + std::string(s) + "'");
}

/// Applicable actions in action-id order with their successor states.
inline std::vector<std::pair<std::size_t, State>> successor_gen(const Task& task,
                                                                const State& s) {
  std::vector<std::pair<std::size_t, State>> out;
  for (std::size_t i = 0; i < task.actions().size(); ++i) {
    const auto& a = task.action(i);
    if (applicable(s, a)) out.emplace_back(i, apply_unchecked(s, a));
  }
  return out;
}

/// Delete-relaxation h^max. Negative preconditions and negative goals are
/// dropped, which relaxes further and keeps the estimate admissible.
class HMax {
 public:
  explicit HMax(const Task& task) : task_(task), by_pre_(task.num_props()) {
    const auto& actions = task.actions();
    pre_count_.resize(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) {
      for (auto l : actions[i].pre) {
        if (!l.positive) continue;
        by_pre_[l.prop].push_back(i);
        ++pre_count_[i];
      }
      if (pre_count_[i] == 0) no_pre_.push_back(i);
    }
    for (auto l : task.goal()) {
      if (l.positive) goals_.push_back(l.prop);
    }
  }

  Cost operator()(const State& s) const {
    if (goals_.empty()) return 0;
    std::vector<Cost> cost(task_.num_props(), kInfinity);
    std::vector<std::uint32_t> remaining = pre_count_;
    using Entry = std::pair<Cost, PropId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    auto reach = [&](PropId p, Cost c) {
      if (c < cost[p]) {
        cost[p] = c;
        queue.emplace(c, p);
      }
    };
    for (auto p : s.true_props()) reach(p, 0);
    for (auto i : no_pre_) {
      for (auto p : task_.action(i).add) reach(p, task_.action(i).cost);
    }
    std::size_t open_goals = goals_.size();
    std::vector<char> is_goal(task_.num_props(), 0);
    for (auto g : goals_) is_goal[g] = 1;
    Cost h = 0;
    while (!queue.empty()) {
      auto [c, p] = queue.top();
      queue.pop();
      if (c != cost[p]) continue;
      if (is_goal[p]) {
        is_goal[p] = 0;
        h = c;  // popped in nondecreasing order, so this is the max so far
        if (--open_goals == 0) return h;
      }
      for (auto i : by_pre_[p]) {
        if (--remaining[i] == 0) {
          const auto& a = task_.action(i);
          for (auto q : a.add) reach(q, c + a.cost);
        }
      }
    }
    return kInfinity;
  }

 private:
  const Task& task_;
  std::vector<std::vector<std::size_t>> by_pre_;
  std::vector<std::uint32_t> pre_count_;
  std::vector<std::size_t> no_pre_;
  std::vector<PropId> goals_;
};

inline Cost hmax(const Task& task, const State& s) { return HMax(task)(s); }

struct SearchLimits {
  std::optional<std::uint64_t> max_expansions;
  std::optional<double> max_seconds;
};

enum class Outcome { Solved, Unsolvable, ResourceLimit };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Solved: return "solved";
    case Outcome::Unsolvable: return "unsolvable";
    case Outcome::ResourceLimit: return "resource_limit";
  }
  return "?";
}

struct SearchStats {
  std::uint64_t expanded = 0;
  std::uint64_t generated = 0;
  std::uint64_t peak_open = 0;
  double wall_time = 0.0;
};

struct SearchResult {
  Outcome outcome = Outcome::Unsolvable;
  Plan plan;
  Cost cost = 0;
  SearchStats stats;
};

/// A* with a closed list and no reopening (both heuristics are consistent).
/// Ties on f go to lower h, then to earlier insertion.
inline SearchResult astar(const Task& task, Heuristic heuristic,
                          const SearchLimits& limits = {}) {
  using Clock = std::chrono::steady_clock;
  auto start = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  std::optional<HMax> hm;
  if (heuristic == Heuristic::HMax) hm.emplace(task);
  auto estimate = [&](const State& s) -> Cost { return hm ? (*hm)(s) : 0; };

  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  struct Node {
    Cost g;
    Cost h;
    std::uint32_t parent;
    std::uint32_t via;
    bool closed;
  };
  std::vector<State> states;
  std::vector<Node> nodes;
  std::unordered_map<State, std::uint32_t, StateHash> index;

  struct Entry {
    Cost f, h;
    std::uint64_t seq;
    std::uint32_t id;
    Cost g;
    bool operator>(const Entry& o) const {
      if (f != o.f) return f > o.f;
      if (h != o.h) return h > o.h;
      return seq > o.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t seq = 0;

  SearchResult result;
  auto finish = [&](Outcome o) {
    result.outcome = o;
    result.stats.wall_time = elapsed();
    return result;
  };

  auto init = task.initial_state();
  Cost h0 = estimate(init);
  if (h0 == kInfinity) return finish(Outcome::Unsolvable);
  states.push_back(init);
  nodes.push_back({0, h0, kNone, kNone, false});
  index.emplace(init, 0);
  open.push({h0, h0, seq++, 0, 0});
  result.stats.generated = 1;

  while (!open.empty()) {
    result.stats.peak_open = std::max<std::uint64_t>(result.stats.peak_open, open.size());
    auto top = open.top();
    open.pop();
    auto& node = nodes[top.id];
    if (node.closed || top.g != node.g) continue;
    node.closed = true;

    if (is_goal(task, states[top.id])) {
      std::vector<std::string> steps;
      for (auto id = top.id; nodes[id].parent != kNone; id = nodes[id].parent) {
        steps.push_back(task.action(nodes[id].via).name);
      }
      result.plan.steps.assign(steps.rbegin(), steps.rend());
      result.cost = top.g;
      return finish(Outcome::Solved);
    }
    if (limits.max_expansions && result.stats.expanded >= *limits.max_expansions) {
      return finish(Outcome::ResourceLimit);
    }
    if (limits.max_seconds && (result.stats.expanded & 255) == 0 &&
        elapsed() > *limits.max_seconds) {
      return finish(Outcome::ResourceLimit);
    }
    ++result.stats.expanded;

    const State current = states[top.id];
    const Cost g = top.g;
    for (std::size_t i = 0; i < task.actions().size(); ++i) {
      const auto& a = task.action(i);
      if (!applicable(current, a)) continue;
      Cost g2 = 0;
      if (__builtin_add_overflow(g, a.cost, &g2)) {
        throw CostOverflow("path cost overflows 64 bits");
      }
      auto next = apply_unchecked(current, a);
      ++result.stats.generated;
      auto it = index.find(next);
      std::uint32_t id = 0;
      if (it == index.end()) {
        Cost h = estimate(next);
        if (h == kInfinity) continue;
        id = static_cast<std::uint32_t>(states.size());
        states.push_back(next);
        nodes.push_back({g2, h, top.id, static_cast<std::uint32_t>(i), false});
        index.emplace(std::move(next), id);
      } else {
        id = it->second;
        auto& n = nodes[id];
        if (n.closed || g2 >= n.g) continue;
        n.g = g2;
        n.parent = top.id;
        n.via = static_cast<std::uint32_t>(i);
      }
      open.push({nodes[id].g + nodes[id].h, nodes[id].h, seq++, id, nodes[id].g});
    }
  }
  return finish(Outcome::Unsolvable);
}

}  // namespace uniplan
