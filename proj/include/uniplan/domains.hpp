#pragma once

// Benchmark generators: grid navigation with per-cell traversal costs and
// monthly savings plans with increasing costs for larger amounts.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "uniplan/error.hpp"
#include "uniplan/task.hpp"

namespace uniplan {

struct Cell {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct NavSpec {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<Cost>> cell_cost;  // rows x cols
  Cell start;
  Cell goal;
};

inline void check_spec(const NavSpec& s) {
  if (s.rows == 0 || s.cols == 0) throw InvalidSpec("grid must be non-empty");
  if (s.cell_cost.size() != s.rows) throw InvalidSpec("cell_cost needs one row per grid row");
  for (const auto& row : s.cell_cost) {
    if (row.size() != s.cols) throw InvalidSpec("cell_cost row has wrong width");
    for (auto c : row) {
      if (c < 1 || c > kMaxActionCost) throw InvalidSpec("cell costs must be in [1, max]");
    }
  }
  auto inside = [&](Cell c) { return c.row < s.rows && c.col < s.cols; };
  if (!inside(s.start) || !inside(s.goal)) throw InvalidSpec("start/goal outside the grid");
  if (s.start == s.goal) throw InvalidSpec("start equals goal");
}

inline std::string at_name(std::size_t r, std::size_t c) {
  return "at_" + std::to_string(r) + "_" + std::to_string(c);
}

/// One at_r_c proposition per cell; moving into a cell pays that cell's
/// cost, so the start cell is free.
inline Task gen_navigation(const NavSpec& spec) {
  check_spec(spec);
  TaskBuilder b;
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) b.prop(at_name(r, c));
  }
  constexpr int kMoves[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      for (const auto& m : kMoves) {
        auto r2 = static_cast<long>(r) + m[0];
        auto c2 = static_cast<long>(c) + m[1];
        if (r2 < 0 || c2 < 0 || r2 >= static_cast<long>(spec.rows) ||
            c2 >= static_cast<long>(spec.cols)) {
          continue;
        }
        auto tr = static_cast<std::size_t>(r2);
        auto tc = static_cast<std::size_t>(c2);
        Action a;
        a.name = "move_" + std::to_string(r) + "_" + std::to_string(c) + "_" +
                 std::to_string(tr) + "_" + std::to_string(tc);
        a.pre = {pos(b.prop(at_name(r, c)))};
        a.del = {b.prop(at_name(r, c))};
        a.add = {b.prop(at_name(tr, tc))};
        a.cost = spec.cell_cost[tr][tc];
        b.action(std::move(a));
      }
    }
  }
  b.init(b.prop(at_name(spec.start.row, spec.start.col)));
  b.goal(pos(b.prop(at_name(spec.goal.row, spec.goal.col))));
  return std::move(b).build();
}

struct SavingLevel {
  Cost amount = 0;
  Cost cost = 0;
  friend bool operator==(const SavingLevel&, const SavingLevel&) = default;
};

struct FinanceSpec {
  Cost target = 0;
  std::size_t horizon = 0;  // months
  std::vector<SavingLevel> levels;
  /// Adds a zero-cost action that checks the savings goal and achieves the
  /// task goal. Without it the goal is the capped savings proposition.
  bool goal_check = true;
};

inline void check_spec(const FinanceSpec& s) {
  if (s.target == 0) throw InvalidSpec("target must be positive");
  if (s.horizon == 0) throw InvalidSpec("horizon must be positive");
  if (s.levels.empty()) throw InvalidSpec("need at least one saving level");
  auto levels = s.levels;
  std::sort(levels.begin(), levels.end(),
            [](auto& a, auto& b) { return a.amount < b.amount; });
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].amount == 0) throw InvalidSpec("amounts must be positive");
    if (levels[i].cost > kMaxActionCost) throw InvalidSpec("level cost too large");
    if (i > 0 && levels[i].amount == levels[i - 1].amount) {
      throw InvalidSpec("duplicate saving amount");
    }
    if (i > 0 && levels[i].cost <= levels[i - 1].cost) {
      throw InvalidSpec("costs must increase strictly with the amount");
    }
  }
  if (levels.back().amount * s.horizon < s.target) {
    throw TargetUnreachable("target " + std::to_string(s.target) +
                            " unreachable within " + std::to_string(s.horizon) +
                            " months");
  }
}

/// State = (month, savings so far capped at the target). Each month exactly
/// one level is saved until the target is reached.
inline Task gen_finance(const FinanceSpec& spec) {
  check_spec(spec);
  TaskBuilder b;
  for (std::size_t t = 0; t <= spec.horizon; ++t) b.prop("month_" + std::to_string(t));

  std::vector<std::set<Cost>> sums(spec.horizon + 1);
  sums[0] = {0};
  for (std::size_t t = 0; t < spec.horizon; ++t) {
    for (auto s : sums[t]) {
      if (s >= spec.target) continue;
      for (const auto& l : spec.levels) sums[t + 1].insert(std::min(s + l.amount, spec.target));
    }
  }
  std::set<Cost> all;
  for (const auto& st : sums) all.insert(st.begin(), st.end());
  for (auto s : all) b.prop("saved_" + std::to_string(s));
  auto saved = [&](Cost s) { return b.prop("saved_" + std::to_string(s)); };
  auto month = [&](std::size_t t) { return b.prop("month_" + std::to_string(t)); };

  for (std::size_t t = 0; t < spec.horizon; ++t) {
    for (auto s : sums[t]) {
      if (s >= spec.target) continue;
      for (const auto& l : spec.levels) {
        auto next = std::min(s + l.amount, spec.target);
        Action a;
        a.name = "save_" + std::to_string(l.amount) + "_m" + std::to_string(t) +
                 "_s" + std::to_string(s);
        a.pre = {pos(month(t)), pos(saved(s))};
        a.del = {month(t), saved(s)};
        a.add = {month(t + 1), saved(next)};
        a.cost = l.cost;
        b.action(std::move(a));
      }
    }
  }
  if (!all.count(spec.target)) {
    throw TargetUnreachable("target " + std::to_string(spec.target) + " unreachable");
  }
  b.init(month(0));
  b.init(saved(0));
  if (spec.goal_check) {
    auto achieved = b.prop("achieved");
    Action check;
    check.name = "check_goal";
    check.pre = {pos(saved(spec.target))};
    check.add = {achieved};
    check.cost = 0;
    b.action(std::move(check));
    b.goal(pos(achieved));
  } else {
    b.goal(pos(saved(spec.target)));
  }
  return std::move(b).build();
}

inline NavSpec parse_nav_spec(const nlohmann::json& j) {
  try {
    NavSpec s;
    s.rows = j.at("rows").get<std::size_t>();
    s.cols = j.at("cols").get<std::size_t>();
    s.cell_cost = j.at("cell_cost").get<std::vector<std::vector<Cost>>>();
    auto start = j.at("start").get<std::vector<std::size_t>>();
    auto goal = j.at("goal").get<std::vector<std::size_t>>();
    if (start.size() != 2 || goal.size() != 2) throw InvalidSpec("start/goal must be [row, col]");
    s.start = {start[0], start[1]};
    s.goal = {goal[0], goal[1]};
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpec(e.what());
  }
}

inline nlohmann::json to_json(const NavSpec& s) {
  return {{"rows", s.rows},
          {"cols", s.cols},
          {"cell_cost", s.cell_cost},
          {"start", {s.start.row, s.start.col}},
          {"goal", {s.goal.row, s.goal.col}}};
}

inline FinanceSpec parse_finance_spec(const nlohmann::json& j) {
  try {
    FinanceSpec s;
    s.target = j.at("target").get<Cost>();
    s.horizon = j.at("horizon").get<std::size_t>();
    for (const auto& l : j.at("levels")) {
      auto pair = l.get<std::vector<Cost>>();
      if (pair.size() != 2) throw InvalidSpec("levels are [amount, cost] pairs");
      s.levels.push_back({pair[0], pair[1]});
    }
    s.goal_check = j.value("goal_check", true);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpec(e.what());
  }
}

inline nlohmann::json to_json(const FinanceSpec& s) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : s.levels) levels.push_back({l.amount, l.cost});
  return {{"target", s.target},
          {"horizon", s.horizon},
          {"levels", levels},
          {"goal_check", s.goal_check}};
}

/// Random grid: costs uniform in [1, max_cost], start bottom-left, goal
/// top-right.
inline NavSpec random_nav_spec(std::size_t rows, std::size_t cols, Cost max_cost,
                               std::mt19937_64& rng) {
  NavSpec s;
  s.rows = rows;
  s.cols = cols;
  std::uniform_int_distribution<Cost> dist(1, max_cost);
  s.cell_cost.assign(rows, std::vector<Cost>(cols));
  for (auto& row : s.cell_cost) {
    for (auto& c : row) c = dist(rng);
  }
  s.start = {rows - 1, 0};
  s.goal = {0, cols - 1};
  return s;
}

/// Random savings instance: `num_levels` amounts in multiples of `unit`,
/// with strictly increasing, convex-ish costs.
inline FinanceSpec random_finance_spec(std::size_t horizon, std::size_t num_levels,
                                       Cost unit, std::mt19937_64& rng) {
  FinanceSpec s;
  s.horizon = horizon;
  std::uniform_int_distribution<Cost> step(1, 3);
  Cost cost = 0;
  for (std::size_t i = 1; i <= num_levels; ++i) {
    cost += step(rng) + (i > 1 ? 1 : 0);
    s.levels.push_back({unit * i, cost});
  }
  std::uniform_int_distribution<std::size_t> pick(1, num_levels);
  Cost target = 0;
  for (std::size_t m = 0; m < horizon; ++m) target += unit * pick(rng);
  s.target = std::max<Cost>(unit, target);
  return s;
}

}  // namespace uniplan
