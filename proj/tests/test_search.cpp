#include <gtest/gtest.h>

#include "support.hpp"

using namespace uniplan;
using namespace uniplan::testing;

TEST(AStar, GoalInInitGivesEmptyPlan) {
  TaskBuilder b;
  auto g = b.prop("g");
  b.action({"a", {}, {g}, {}, 3});
  b.init(g);
  b.goal(pos(g));
  auto t = std::move(b).build();
  for (auto h : {Heuristic::Blind, Heuristic::HMax}) {
    auto r = astar(t, h);
    EXPECT_EQ(r.outcome, Outcome::Solved);
    EXPECT_TRUE(r.plan.empty());
    EXPECT_EQ(r.cost, 0U);
  }
}

TEST(AStar, UnreachableGoal) {
  TaskBuilder b;
  auto g = b.prop("g");
  auto x = b.prop("x");
  b.action({"a", {}, {x}, {}, 1});
  b.goal(pos(g));
  auto t = std::move(b).build();
  EXPECT_EQ(astar(t, Heuristic::Blind).outcome, Outcome::Unsolvable);
  EXPECT_EQ(astar(t, Heuristic::HMax).outcome, Outcome::Unsolvable);
}

TEST(AStar, ExpansionLimit) {
  auto t = gen_navigation(demo_nav_spec());
  SearchLimits lim;
  lim.max_expansions = 1;
  EXPECT_EQ(astar(t, Heuristic::Blind, lim).outcome, Outcome::ResourceLimit);
}

TEST(AStar, FindsCheapestRouteNotShortest) {
  TaskBuilder b;
  auto s = b.prop("s");
  auto m = b.prop("m");
  auto g = b.prop("g");
  b.action({"direct", {pos(s)}, {g}, {s}, 10});
  b.action({"hop1", {pos(s)}, {m}, {s}, 2});
  b.action({"hop2", {pos(m)}, {g}, {m}, 3});
  b.init(s);
  b.goal(pos(g));
  auto t = std::move(b).build();
  for (auto h : {Heuristic::Blind, Heuristic::HMax}) {
    auto r = astar(t, h);
    EXPECT_EQ(r.cost, 5U);
    EXPECT_EQ(r.plan, (Plan{{"hop1", "hop2"}}));
    EXPECT_TRUE(validate(t, r.plan));
  }
}

TEST(AStar, MatchesOracleOnRandomTasks) {
  std::mt19937_64 rng(17);
  RandomTaskParams p;
  for (int i = 0; i < 40; ++i) {
    auto t = random_solvable_task(rng, p, 500);
    auto blind = astar(t, Heuristic::Blind);
    auto hm = astar(t, Heuristic::HMax);
    ASSERT_EQ(blind.outcome, Outcome::Solved);
    ASSERT_EQ(hm.outcome, Outcome::Solved);
    EXPECT_EQ(blind.cost, hm.cost);
    EXPECT_TRUE(validate(t, hm.plan));
    EXPECT_EQ(plan_cost(t, hm.plan), hm.cost);
    auto gd = goal_distances(t);
    EXPECT_EQ(gd.h_star[0], hm.cost);
    EXPECT_LE(hm.stats.expanded, blind.stats.expanded);
  }
}

TEST(HMax, Examples) {
  TaskBuilder b;
  auto g = b.prop("g");
  b.action({"a", {}, {g}, {}, 5});
  b.goal(pos(g));
  auto t = std::move(b).build();
  EXPECT_EQ(hmax(t, t.initial_state()), 5U);
  State sg(1);
  sg.set(g);
  EXPECT_EQ(hmax(t, sg), 0U);
}

TEST(HMax, TakesMaxOverGoals) {
  TaskBuilder b;
  auto g1 = b.prop("g1");
  auto g2 = b.prop("g2");
  auto m = b.prop("m");
  b.action({"a", {}, {g1}, {}, 4});
  b.action({"b", {}, {m}, {}, 2});
  b.action({"c", {pos(m)}, {g2}, {}, 3});
  b.goal(pos(g1));
  b.goal(pos(g2));
  auto t = std::move(b).build();
  EXPECT_EQ(hmax(t, t.initial_state()), 5U);
}

TEST(HMax, DeadEndIsInfinite) {
  TaskBuilder b;
  auto g = b.prop("g");
  auto x = b.prop("x");
  b.action({"a", {pos(x)}, {g}, {}, 1});
  b.goal(pos(g));
  auto t = std::move(b).build();
  EXPECT_EQ(hmax(t, t.initial_state()), kInfinity);
}

TEST(HMax, AdmissibleOnRandomTasks) {
  std::mt19937_64 rng(23);
  RandomTaskParams p;
  for (int i = 0; i < 30; ++i) {
    auto t = random_solvable_task(rng, p, 500);
    HMax h(t);
    auto gd = goal_distances(t);
    for (std::size_t k = 0; k < gd.states.size(); ++k) {
      EXPECT_LE(h(gd.states[k]), gd.h_star[k]);
    }
  }
}

TEST(Successors, NoneApplicable) {
  TaskBuilder b;
  auto x = b.prop("x");
  b.action({"a", {pos(x)}, {}, {}, 1});
  auto t = std::move(b).build();
  EXPECT_TRUE(successor_gen(t, t.initial_state()).empty());
}

TEST(AStar, LargeCostsSumExactly) {
  TaskBuilder b;
  auto p0 = b.prop("p0");
  auto p1 = b.prop("p1");
  auto p2 = b.prop("p2");
  b.action({"a", {pos(p0)}, {p1}, {p0}, kMaxActionCost});
  b.action({"b", {pos(p1)}, {p2}, {p1}, kMaxActionCost});
  b.init(p0);
  b.goal(pos(p2));
  auto t = std::move(b).build();
  EXPECT_EQ(astar(t, Heuristic::HMax).cost, 2 * kMaxActionCost);
}

TEST(AStar, ScaledLongChainStaysExact) {
  // 1000 steps of cost 1000 under W = 10^6: g reaches 10^12, far below 2^63.
  TaskBuilder b;
  constexpr std::size_t n = 1000;
  for (std::size_t i = 0; i <= n; ++i) b.prop("c" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    auto from = static_cast<PropId>(i);
    auto to = static_cast<PropId>(i + 1);
    b.action({"go" + std::to_string(i), {pos(from)}, {to}, {from}, 1000});
  }
  b.init(0);
  b.goal(pos(static_cast<PropId>(n)));
  auto t = std::move(b).build();
  auto ct = compile(t, Metric::Count, Order::CostFirst);
  auto r = astar(ct.task, Heuristic::HMax);
  ASSERT_EQ(r.outcome, Outcome::Solved);
  EXPECT_EQ(r.cost, 1000ULL * 1000ULL * kCostFirstScale + 1);
  auto d = decode(r.plan, ct);
  EXPECT_EQ(d.cost, 1'000'000U);
  EXPECT_EQ(d.dispersion, 1U);
}
