#include <gtest/gtest.h>

#include "support.hpp"

using namespace uniplan;
using namespace uniplan::testing;

TEST(Navigation, OneByTwo) {
  NavSpec s;
  s.rows = 1;
  s.cols = 2;
  s.cell_cost = {{1, 4}};
  s.start = {0, 0};
  s.goal = {0, 1};
  auto t = gen_navigation(s);
  auto e = enumerate_simple_plans(t);
  ASSERT_EQ(e.plans.size(), 1U);
  EXPECT_EQ(plan_cost(t, e.plans[0]), 4U);
  EXPECT_EQ(e.plans[0], (Plan{{"move_0_0_0_1"}}));
}

TEST(Navigation, UniformCostsHaveNoDispersion) {
  NavSpec s;
  s.rows = 3;
  s.cols = 3;
  s.cell_cost.assign(3, std::vector<Cost>(3, 2));
  s.start = {2, 0};
  s.goal = {0, 2};
  auto t = gen_navigation(s);
  for (const auto& p : all_cost_optimal(t)) {
    auto r = report(t, p);
    EXPECT_EQ(r.count, 1U);
    EXPECT_EQ(r.delta, 0U);
    EXPECT_EQ(r.range, 0U);
  }
}

TEST(Navigation, StructureAndNames) {
  auto spec = demo_nav_spec();
  auto t = gen_navigation(spec);
  EXPECT_EQ(t.num_props(), 12U);
  // 2 * (rows * (cols - 1) + cols * (rows - 1)) directed moves.
  EXPECT_EQ(t.actions().size(), 2U * (3 * 3 + 4 * 2));
  EXPECT_EQ(t.prop_name(t.init().front()), "at_2_0");
  EXPECT_EQ(t.action(0).name, "move_0_0_1_0");
}

TEST(Navigation, InvalidSpecs) {
  NavSpec s;
  EXPECT_THROW(gen_navigation(s), InvalidSpec);
  s.rows = 1;
  s.cols = 2;
  s.cell_cost = {{1, 0}};
  s.goal = {0, 1};
  EXPECT_THROW(gen_navigation(s), InvalidSpec);
  s.cell_cost = {{1, 1}};
  s.goal = {0, 0};
  EXPECT_THROW(gen_navigation(s), InvalidSpec);
  s.goal = {3, 3};
  EXPECT_THROW(gen_navigation(s), InvalidSpec);
}

TEST(Navigation, DemoGridShape) {
  auto t = gen_navigation(demo_nav_spec());
  auto e = enumerate_simple_plans(t);
  ASSERT_TRUE(e.complete);
  auto cd = lex_min(t, e.plans, Metric::Count, Order::CostFirst);
  EXPECT_EQ(cd.cost, 9U);
  // Some strictly costlier plan has R = 0.
  auto dc = lex_min(t, e.plans, Metric::Range, Order::DispersionFirst);
  EXPECT_EQ(dc.dispersion, 0U);
  EXPECT_GT(dc.cost, 9U);
}

TEST(Finance, SingleLevelUniquePlan) {
  FinanceSpec s;
  s.target = 4;
  s.horizon = 4;
  s.levels = {{1, 1}};
  s.goal_check = false;
  auto t = gen_finance(s);
  auto e = enumerate_simple_plans(t);
  ASSERT_EQ(e.plans.size(), 1U);
  EXPECT_EQ(e.plans[0].size(), 4U);
  EXPECT_EQ(report(t, e.plans[0]).count, 1U);

  s.goal_check = true;
  auto checked = gen_finance(s);
  auto plans = enumerate_simple_plans(checked).plans;
  ASSERT_EQ(plans.size(), 1U);
  EXPECT_EQ(plans[0].steps.back(), "check_goal");
  // The zero-cost check joins the cost alphabet.
  EXPECT_EQ(report(checked, plans[0]).count, 2U);
}

TEST(Finance, FlatSavingsUnderDispersionFirst) {
  FinanceSpec s;
  s.target = 1000;
  s.horizon = 4;
  s.levels = {{100, 1}, {250, 3}, {500, 8}};
  auto t = gen_finance(s);
  auto e = enumerate_simple_plans(t);
  ASSERT_TRUE(e.complete);
  bool flat = std::any_of(e.plans.begin(), e.plans.end(), [&](const Plan& p) {
    return std::count_if(p.steps.begin(), p.steps.end(),
                         [](const std::string& a) { return a.starts_with("save_250_"); }) == 4;
  });
  EXPECT_TRUE(flat);
  auto dc = lex_min(t, e.plans, Metric::Count, Order::DispersionFirst);
  EXPECT_EQ(dc.dispersion, 2U);
  auto res = astar(compile(t, Metric::Count, Order::DispersionFirst).task, Heuristic::HMax);
  auto d = decode(res.plan, compile(t, Metric::Count, Order::DispersionFirst));
  EXPECT_EQ(d.dispersion, 2U);
  EXPECT_EQ(d.cost, dc.cost);
}

TEST(Finance, DemoFixtureOptima) {
  auto t = gen_finance(demo_finance_spec());
  auto e = enumerate_simple_plans(t);
  ASSERT_TRUE(e.complete);
  // target 600 in 3 months from {100:1, 200:3, 300:6}: 200+200+200 costs 9,
  // 300+300 costs 12, 100+200+300 costs 10.
  auto cd = lex_min(t, e.plans, Metric::Count, Order::CostFirst);
  EXPECT_EQ(cd.cost, 9U);
  EXPECT_EQ(cd.dispersion, 2U);
  auto rdc = lex_min(t, e.plans, Metric::Range, Order::DispersionFirst);
  EXPECT_EQ(rdc.cost, 9U);
  auto ddc = lex_min(t, e.plans, Metric::Delta, Order::DispersionFirst);
  EXPECT_EQ(std::pair(ddc.cost, ddc.dispersion), std::pair(Cost{9}, std::uint64_t{3}));
}

TEST(Finance, InvalidSpecs) {
  FinanceSpec s;
  s.target = 1000;
  s.horizon = 2;
  s.levels = {{100, 1}, {200, 3}};
  EXPECT_THROW(gen_finance(s), TargetUnreachable);
  s.horizon = 10;
  s.levels = {{100, 3}, {200, 3}};
  EXPECT_THROW(gen_finance(s), InvalidSpec);
  s.levels = {};
  EXPECT_THROW(gen_finance(s), InvalidSpec);
}

TEST(SpecJson, RoundTrip) {
  auto nav = demo_nav_spec();
  auto nav2 = parse_nav_spec(to_json(nav));
  EXPECT_EQ(nav2.cell_cost, nav.cell_cost);
  EXPECT_EQ(nav2.start, nav.start);
  auto fin = demo_finance_spec();
  auto fin2 = parse_finance_spec(to_json(fin));
  EXPECT_EQ(fin2.levels, fin.levels);
  EXPECT_EQ(fin2.target, fin.target);
  EXPECT_THROW(parse_nav_spec(nlohmann::json::parse(R"({"rows": 1})")), InvalidSpec);
}

TEST(RandomSpecs, SeededAndValid) {
  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 20; ++i) {
    auto x = random_nav_spec(3, 4, 5, a);
    auto y = random_nav_spec(3, 4, 5, b);
    EXPECT_EQ(x.cell_cost, y.cell_cost);
    EXPECT_NO_THROW(gen_navigation(x));
    auto f = random_finance_spec(4, 3, 100, a);
    random_finance_spec(4, 3, 100, b);
    EXPECT_NO_THROW(gen_finance(f));
  }
}
