#pragma once

// Shared helpers for the unit tests and the acceptance binary: random task
// generation and the enumerable fixture suite.

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "uniplan/uniplan.hpp"

namespace uniplan::testing {

#ifndef UNIPLAN_DATA_DIR
#define UNIPLAN_DATA_DIR "data"
#endif

inline std::string data_path(const std::string& name) {
  return std::string(UNIPLAN_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RandomTaskParams {
  std::size_t props = 6;
  std::size_t actions = 10;
  std::size_t distinct_costs = 3;  // upper bound on |c(A)|
  Cost max_cost = 12;
  double neg_pre = 0.15;  // chance of a negative precondition per literal
  bool negative_goals = true;
  std::size_t walk = 6;  // length of the random walk that picks the goal
};

/// Random STRIPS task. The goal is read off the end of a random walk from
/// the initial state, so the task is solvable whenever the walk is
/// non-trivial.
inline Task random_task(std::mt19937_64& rng, const RandomTaskParams& p) {
  std::uniform_int_distribution<Cost> cost_dist(1, p.max_cost);
  std::vector<Cost> palette;
  while (palette.size() < p.distinct_costs) palette.push_back(cost_dist(rng));

  TaskBuilder b;
  for (std::size_t i = 0; i < p.props; ++i) b.prop("p" + std::to_string(i));
  std::uniform_int_distribution<PropId> prop(0, static_cast<PropId>(p.props - 1));
  std::bernoulli_distribution coin(0.5), negp(p.neg_pre);
  std::uniform_int_distribution<std::size_t> small(1, 2);
  std::uniform_int_distribution<std::size_t> pick(0, palette.size() - 1);

  std::vector<Action> actions;
  for (std::size_t i = 0; i < p.actions; ++i) {
    Action a;
    a.name = "a" + std::to_string(i);
    std::set<PropId> used;
    for (std::size_t k = small(rng); k > 0; --k) {
      auto q = prop(rng);
      if (!used.insert(q).second) continue;
      a.pre.push_back({q, !negp(rng)});
    }
    for (std::size_t k = small(rng); k > 0; --k) {
      auto q = prop(rng);
      if (std::find(a.del.begin(), a.del.end(), q) == a.del.end()) a.add.push_back(q);
    }
    for (std::size_t k = small(rng) - 1; k > 0; --k) {
      auto q = prop(rng);
      if (std::find(a.add.begin(), a.add.end(), q) == a.add.end()) a.del.push_back(q);
    }
    // Deleting a positive precondition keeps the state graph from being
    // monotone, which is where the compilations get interesting.
    for (auto l : a.pre) {
      if (l.positive && coin(rng) &&
          std::find(a.add.begin(), a.add.end(), l.prop) == a.add.end()) {
        a.del.push_back(l.prop);
      }
    }
    a.cost = palette[pick(rng)];
    actions.push_back(a);
    b.action(std::move(a));
  }
  std::vector<PropId> init;
  for (std::size_t i = 0; i < p.props; ++i) {
    if (coin(rng)) {
      b.init(static_cast<PropId>(i));
      init.push_back(static_cast<PropId>(i));
    }
  }

  // Walk to pick the goal.
  State s(p.props);
  for (auto q : init) s.set(q);
  State start = s;
  for (std::size_t step = 0; step < p.walk; ++step) {
    std::vector<const Action*> app;
    for (const auto& a : actions) {
      if (applicable(s, a)) app.push_back(&a);
    }
    if (app.empty()) break;
    std::uniform_int_distribution<std::size_t> which(0, app.size() - 1);
    s = apply_unchecked(s, *app[which(rng)]);
  }
  std::vector<PropId> diff;
  for (std::size_t i = 0; i < p.props; ++i) {
    if (s.test(static_cast<PropId>(i)) != start.test(static_cast<PropId>(i))) {
      diff.push_back(static_cast<PropId>(i));
    }
  }
  // Prefer literals the initial state violates so the goal is not trivial.
  std::vector<PropId> goal_props = diff;
  for (std::size_t i = 0; i < p.props && goal_props.size() < 2; ++i) {
    if (std::find(goal_props.begin(), goal_props.end(), i) == goal_props.end() && coin(rng)) {
      goal_props.push_back(static_cast<PropId>(i));
    }
  }
  for (auto q : goal_props) {
    bool value = s.test(q);
    if (!value && !p.negative_goals) continue;
    b.goal({q, value});
  }
  return std::move(b).build();
}

/// Random task that is solvable, has at most `max_states` reachable states
/// and a non-empty optimal plan.
inline Task random_solvable_task(std::mt19937_64& rng, const RandomTaskParams& p,
                                 std::size_t max_states = 5000) {
  for (;;) {
    auto t = random_task(rng, p);
    if (is_goal(t, t.initial_state())) continue;
    auto sweep = state_sweep(t, max_states);
    if (!sweep.complete) continue;
    bool reachable = std::any_of(sweep.states.begin(), sweep.states.end(),
                                 [&](const State& s) { return is_goal(t, s); });
    if (reachable) return t;
  }
}

struct Fixture {
  std::string name;
  Task task;
};

inline NavSpec demo_nav_spec() {
  return parse_nav_spec(nlohmann::json::parse(slurp(data_path("demo_nav.spec.json"))));
}

inline FinanceSpec demo_finance_spec() {
  return parse_finance_spec(
      nlohmann::json::parse(slurp(data_path("demo_finance.spec.json"))));
}

/// The enumerable fixture suite: the shipped demos, small navigation grids,
/// savings plans and random tasks. Every member has a complete simple-plan
/// enumeration under the default limits.
inline std::vector<Fixture> fixture_suite() {
  std::vector<Fixture> out;
  out.push_back({"demo_nav", gen_navigation(demo_nav_spec())});
  out.push_back({"demo_finance", gen_finance(demo_finance_spec())});

  std::mt19937_64 rng(20240611);
  const std::pair<std::size_t, std::size_t> shapes[] = {{2, 3}, {2, 4}, {3, 3}, {2, 5},
                                                        {3, 3}, {3, 4}, {2, 4}, {3, 3}};
  for (std::size_t i = 0; i < std::size(shapes); ++i) {
    auto spec = random_nav_spec(shapes[i].first, shapes[i].second, 2 + i % 4, rng);
    out.push_back({"nav_" + std::to_string(i), gen_navigation(spec)});
  }
  for (std::size_t i = 0; i < 6; ++i) {
    auto spec = random_finance_spec(3 + i % 2, 2 + i % 2, 100, rng);
    spec.goal_check = i % 3 != 0;
    out.push_back({"finance_" + std::to_string(i), gen_finance(spec)});
  }
  RandomTaskParams p;
  p.props = 5;
  p.actions = 8;
  for (std::size_t i = 0; out.size() < 36; ++i) {
    p.distinct_costs = 2 + i % 3;
    auto t = random_solvable_task(rng, p, 64);
    EnumerationLimits lim;
    lim.max_plans = 20'000;
    lim.max_states = 200'000;
    if (!enumerate_simple_plans(t, lim).complete) continue;
    out.push_back({"random_" + std::to_string(i), std::move(t)});
  }
  return out;
}

inline const std::vector<Fixture>& fixtures() {
  static const auto suite = fixture_suite();
  return suite;
}

}  // namespace uniplan::testing
