#pragma once

// Grounded STRIPS tasks with negative preconditions, evaluated closed-world.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "uniplan/error.hpp"

namespace uniplan {

using PropId = std::uint32_t;
using Cost = std::uint64_t;

/// Largest cost an input task may carry. Leaves room for the 10^6 cost
/// scaling and plans of several thousand steps without overflowing 64 bits.
inline constexpr Cost kMaxActionCost = 1'000'000'000;

/// Largest cost any task may store, compiled tasks included.
inline constexpr Cost kMaxStoredCost = 1'000'000'000'000'000'000;

struct Literal {
  PropId prop = 0;
  bool positive = true;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

inline Literal pos(PropId p) { return {p, true}; }
inline Literal neg(PropId p) { return {p, false}; }

struct Action {
  std::string name;
  std::vector<Literal> pre;
  std::vector<PropId> add;
  std::vector<PropId> del;
  Cost cost = 1;

  friend bool operator==(const Action&, const Action&) = default;
};

/// Complete state stored as the set of true propositions.
class State {
 public:
  State() = default;
  explicit State(std::size_t num_props)
      : num_props_(num_props), words_((num_props + 63) / 64, 0) {}

  std::size_t num_props() const { return num_props_; }

  bool test(PropId p) const { return (words_[p >> 6] >> (p & 63)) & 1U; }
  void set(PropId p) { words_[p >> 6] |= std::uint64_t{1} << (p & 63); }
  void reset(PropId p) { words_[p >> 6] &= ~(std::uint64_t{1} << (p & 63)); }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  std::vector<PropId> true_props() const {
    std::vector<PropId> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      auto w = words_[i];
      while (w != 0) {
        out.push_back(static_cast<PropId>(i * 64 + std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  /// splitmix64-based, fixed seed: identical across runs and platforms.
  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ num_props_;
    for (auto w : words_) {
      std::uint64_t z = (h += 0x9e3779b97f4a7c15ULL) ^ w;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      h ^= z ^ (z >> 31);
    }
    return static_cast<std::size_t>(h);
  }

  friend bool operator==(const State&, const State&) = default;

 private:
  std::size_t num_props_ = 0;
  std::vector<std::uint64_t> words_;
};

struct StateHash {
  std::size_t operator()(const State& s) const { return s.hash(); }
};

struct Plan {
  std::vector<std::string> steps;

  bool empty() const { return steps.empty(); }
  std::size_t size() const { return steps.size(); }
  friend bool operator==(const Plan&, const Plan&) = default;
  friend auto operator<=>(const Plan&, const Plan&) = default;
};

namespace detail {

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

inline void check_consistent(const std::vector<Literal>& lits,
                             const std::string& where) {
  // lits is sorted, so both polarities of a proposition are adjacent.
  for (std::size_t i = 1; i < lits.size(); ++i) {
    if (lits[i].prop == lits[i - 1].prop) {
      throw InvalidTask(where + ": inconsistent literal set");
    }
  }
}

}  // namespace detail

/// Immutable grounded task. The constructor normalizes every set (sorted by
/// proposition id, duplicates removed) and throws InvalidTask on violations.
class Task {
 public:
  Task() = default;

  Task(std::vector<std::string> props, std::vector<Action> actions,
       std::vector<PropId> init, std::vector<Literal> goal)
      : props_(std::move(props)),
        actions_(std::move(actions)),
        init_(std::move(init)),
        goal_(std::move(goal)) {
    for (std::size_t i = 0; i < props_.size(); ++i) {
      if (props_[i].empty()) throw InvalidTask("empty proposition name");
      if (!prop_index_.emplace(props_[i], static_cast<PropId>(i)).second) {
        throw InvalidTask("duplicate proposition '" + props_[i] + "'");
      }
    }
    auto check_prop = [&](PropId p, const std::string& where) {
      if (p >= props_.size()) {
        throw InvalidTask(where + ": proposition id " + std::to_string(p) +
                          " out of range");
      }
    };
    for (std::size_t i = 0; i < actions_.size(); ++i) {
      auto& a = actions_[i];
      if (a.name.empty()) throw InvalidTask("empty action name");
      if (!action_index_.emplace(a.name, i).second) {
        throw InvalidTask("duplicate action '" + a.name + "'");
      }
      if (a.cost > kMaxStoredCost) {
        throw InvalidTask("action '" + a.name + "': cost exceeds " +
                          std::to_string(kMaxStoredCost));
      }
      for (auto l : a.pre) check_prop(l.prop, a.name);
      for (auto p : a.add) check_prop(p, a.name);
      for (auto p : a.del) check_prop(p, a.name);
      detail::sort_unique(a.pre);
      detail::sort_unique(a.add);
      detail::sort_unique(a.del);
      detail::check_consistent(a.pre, "action '" + a.name + "'");
      std::vector<PropId> both;
      std::set_intersection(a.add.begin(), a.add.end(), a.del.begin(),
                            a.del.end(), std::back_inserter(both));
      if (!both.empty()) {
        throw InvalidTask("action '" + a.name + "': '" + props_[both.front()] +
                          "' is both added and deleted");
      }
    }
    for (auto p : init_) check_prop(p, "init");
    for (auto l : goal_) check_prop(l.prop, "goal");
    detail::sort_unique(init_);
    detail::sort_unique(goal_);
    detail::check_consistent(goal_, "goal");
  }

  std::size_t num_props() const { return props_.size(); }
  const std::vector<std::string>& props() const { return props_; }
  const std::string& prop_name(PropId p) const { return props_.at(p); }
  std::optional<PropId> find_prop(std::string_view name) const {
    auto it = prop_index_.find(std::string(name));
    if (it == prop_index_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<Action>& actions() const { return actions_; }
  const Action& action(std::size_t i) const { return actions_.at(i); }
  std::optional<std::size_t> find_action(std::string_view name) const {
    auto it = action_index_.find(std::string(name));
    if (it == action_index_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<PropId>& init() const { return init_; }
  const std::vector<Literal>& goal() const { return goal_; }

  State initial_state() const {
    State s(props_.size());
    for (auto p : init_) s.set(p);
    return s;
  }

  friend bool operator==(const Task& a, const Task& b) {
    return a.props_ == b.props_ && a.actions_ == b.actions_ &&
           a.init_ == b.init_ && a.goal_ == b.goal_;
  }

 private:
  std::vector<std::string> props_;
  std::vector<Action> actions_;
  std::vector<PropId> init_;
  std::vector<Literal> goal_;
  std::unordered_map<std::string, PropId> prop_index_;
  std::unordered_map<std::string, std::size_t> action_index_;
};

/// Incremental construction by name; build() validates.
class TaskBuilder {
 public:
  /// Returns the id of `name`, creating the proposition on first use.
  PropId prop(const std::string& name) {
    auto [it, inserted] =
        index_.emplace(name, static_cast<PropId>(props_.size()));
    if (inserted) props_.push_back(name);
    return it->second;
  }

  bool has_prop(const std::string& name) const { return index_.count(name) > 0; }

  TaskBuilder& action(Action a) {
    actions_.push_back(std::move(a));
    return *this;
  }
  TaskBuilder& init(PropId p) {
    init_.push_back(p);
    return *this;
  }
  TaskBuilder& goal(Literal l) {
    goal_.push_back(l);
    return *this;
  }

  Task build() && {
    return Task(std::move(props_), std::move(actions_), std::move(init_),
                std::move(goal_));
  }

 private:
  std::vector<std::string> props_;
  std::unordered_map<std::string, PropId> index_;
  std::vector<Action> actions_;
  std::vector<PropId> init_;
  std::vector<Literal> goal_;
};

inline bool holds(const State& s, std::span<const Literal> lits) {
  return std::all_of(lits.begin(), lits.end(), [&](Literal l) {
    return s.test(l.prop) == l.positive;
  });
}

inline bool applicable(const State& s, const Action& a) {
  return holds(s, a.pre);
}

inline bool is_goal(const Task& task, const State& s) {
  return holds(s, task.goal());
}

/// Successor without the applicability check; callers must have checked.
inline State apply_unchecked(const State& s, const Action& a) {
  State next = s;
  for (auto p : a.del) next.reset(p);
  for (auto p : a.add) next.set(p);
  return next;
}

inline State apply(const State& s, const Action& a) {
  if (!applicable(s, a)) throw NotApplicable(1, a.name);
  return apply_unchecked(s, a);
}

/// Maps plan steps to action indices; throws UnknownAction.
inline std::vector<std::size_t> resolve(const Task& task, const Plan& plan) {
  std::vector<std::size_t> ids;
  ids.reserve(plan.size());
  for (const auto& step : plan.steps) {
    auto id = task.find_action(step);
    if (!id) throw UnknownAction(step);
    ids.push_back(*id);
  }
  return ids;
}

/// Runs the plan from the initial state. NotApplicable::step is 1-based.
inline State execute(const Task& task, const Plan& plan) {
  State s = task.initial_state();
  auto ids = resolve(task, plan);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& a = task.action(ids[i]);
    if (!applicable(s, a)) throw NotApplicable(i + 1, a.name);
    s = apply_unchecked(s, a);
  }
  return s;
}

inline bool validate(const Task& task, const Plan& plan) {
  try {
    return is_goal(task, execute(task, plan));
  } catch (const UnknownAction&) {
    return false;
  } catch (const NotApplicable&) {
    return false;
  }
}

inline std::vector<Cost> cost_vector(const Task& task, const Plan& plan) {
  std::vector<Cost> v;
  v.reserve(plan.size());
  for (auto id : resolve(task, plan)) v.push_back(task.action(id).cost);
  return v;
}

inline Cost plan_cost(const Task& task, const Plan& plan) {
  Cost total = 0;
  for (auto id : resolve(task, plan)) total += task.action(id).cost;
  return total;
}

}  // namespace uniplan
