#pragma once

// Task-to-task compilations whose cost-optimal plans are lexicographically
// optimal for (cost, dispersion) or (dispersion, cost).
//
// Every compiled action costs W*c(a) plus a dispersion charge in multiples of
// omega_d, so a compiled plan's total is W*c(pi) + omega_d*d(pi). Cost-first
// uses W = 10^6, omega_d = 1; dispersion-first uses W = 1, omega_d = 2*10^6.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "uniplan/error.hpp"
#include "uniplan/metrics.hpp"
#include "uniplan/task.hpp"

namespace uniplan {

inline constexpr Cost kCostFirstScale = 1'000'000;
inline constexpr Cost kDispersionFirstWeight = 2'000'000;

/// Distinct action costs of a task, strictly increasing.
struct CostAlphabet {
  std::vector<Cost> costs;

  std::size_t size() const { return costs.size(); }
  Cost min() const { return costs.front(); }
  Cost max() const { return costs.back(); }
};

inline CostAlphabet cost_alphabet(const Task& task) {
  if (task.actions().empty()) throw EmptyTask();
  std::set<Cost> s;
  for (const auto& a : task.actions()) s.insert(a.cost);
  return {std::vector<Cost>(s.begin(), s.end())};
}

/// All |m - n| for m, n in c(A) u {0}: every value Delta can take.
struct AbsSet {
  std::vector<Cost> values;

  std::size_t size() const { return values.size(); }
};

inline AbsSet abs_set(const CostAlphabet& alphabet) {
  std::vector<Cost> pool = alphabet.costs;
  pool.push_back(0);
  std::set<Cost> out;
  for (auto m : pool) {
    for (auto n : pool) out.insert(m > n ? m - n : n - m);
  }
  return {std::vector<Cost>(out.begin(), out.end())};
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

enum class DeltaMode { Paper, Strict };

inline std::string_view to_string(DeltaMode m) {
  return m == DeltaMode::Paper ? "paper" : "strict";
}

inline DeltaMode parse_delta_mode(std::string_view s) {
  if (s == "paper") return DeltaMode::Paper;
  if (s == "strict") return DeltaMode::Strict;
  throw std::invalid_argument("unknown delta mode '" + std::string(s) + "'");
}

struct WeightScheme {
  Order order = Order::CostFirst;
  Cost cost_scale = kCostFirstScale;  // W
  Cost omega_d = 1;
  /// Largest value the certified quantity can take: the dispersion for
  /// cost-first, the plan cost for dispersion-first (0 when unknown).
  Cost bound = 0;
  bool certified = false;
  /// Set when the bound could not be certified (BoundUnverified).
  std::string warning;
};

/// Largest dispersion any plan can have, known from the task alone.
inline Cost dispersion_bound(const Task& task, Metric metric) {
  auto alphabet = cost_alphabet(task);
  if (metric == Metric::Count) return alphabet.size();
  return abs_set(alphabet).values.back();
}

/// Integer weights for either order. `reachable_states`, when known, lets
/// dispersion-first certify |S| * max(c(A)) < omega_d.
inline WeightScheme make_scheme(
    Order order, const Task& task, Metric metric,
    std::optional<std::size_t> reachable_states = std::nullopt) {
  WeightScheme s;
  s.order = order;
  if (order == Order::CostFirst) {
    s.cost_scale = kCostFirstScale;
    s.omega_d = 1;
    s.bound = dispersion_bound(task, metric);
    if (s.bound >= s.cost_scale) {
      throw BoundViolation("dispersion bound " + std::to_string(s.bound) +
                           " does not fit below W = " +
                           std::to_string(s.cost_scale));
    }
    s.certified = true;
    return s;
  }
  s.cost_scale = 1;
  s.omega_d = kDispersionFirstWeight;
  auto max_cost = cost_alphabet(task).max();
  if (reachable_states) {
    s.bound = static_cast<Cost>(*reachable_states) * max_cost;
    s.certified = s.bound < s.omega_d;
  }
  if (!s.certified) {
    s.warning = "BoundUnverified: plan-cost bound |S|*max(c(A)) = " +
                (reachable_states ? std::to_string(s.bound) : std::string("unknown")) +
                " not certified below omega_d = " + std::to_string(s.omega_d) +
                "; decoded costs are checked instead";
  }
  return s;
}

struct CompiledTask {
  Task task;
  Metric metric = Metric::Count;
  WeightScheme scheme;
  DeltaMode delta_mode = DeltaMode::Strict;
  /// Parallel to task.actions(): original action name, or nullopt for
  /// bookkeeping actions.
  std::vector<std::optional<std::string>> origin;
};

/// |A'| predicted by the count formulas.
inline std::uint64_t expected_action_count(Metric metric, std::uint64_t actions,
                                           std::uint64_t alphabet,
                                           std::uint64_t abs,
                                           DeltaMode mode = DeltaMode::Paper) {
  switch (metric) {
    case Metric::Count: return 2 * actions;
    case Metric::Delta:
      return actions * alphabet + abs * abs + abs +
             (mode == DeltaMode::Strict ? actions : 0);
    case Metric::Range: return actions * alphabet * alphabet + alphabet * alphabet;
  }
  return 0;
}

namespace detail {

/// Copies the original propositions and hands out collision-checked fresh
/// ones for the bookkeeping.
class CompiledBuilder {
 public:
  explicit CompiledBuilder(const Task& original) {
    for (const auto& p : original.props()) builder_.prop(p);
  }

  PropId fresh(const std::string& name) {
    if (builder_.has_prop(name)) {
      throw InvalidTask("compiled proposition '" + name +
                        "' collides with an existing proposition");
    }
    return builder_.prop(name);
  }

  void action(Action a, std::optional<std::string> from) {
    if (!names_.insert(a.name).second) {
      throw InvalidTask("compiled action name '" + a.name + "' collides");
    }
    builder_.action(std::move(a));
    origin_.push_back(std::move(from));
  }

  TaskBuilder& raw() { return builder_; }
  std::vector<std::optional<std::string>> take_origin() { return std::move(origin_); }

 private:
  TaskBuilder builder_;
  std::set<std::string> names_;
  std::vector<std::optional<std::string>> origin_;
};

inline Cost checked_mul(Cost a, Cost b) {
  Cost r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw CostOverflow("compiled cost overflows");
  return r;
}

inline Cost checked_add(Cost a, Cost b) {
  Cost r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw CostOverflow("compiled cost overflows");
  return r;
}

/// Copy of `a` renamed, with costs scaled and extra conditions appended.
inline Action variant(const Action& a, std::string name, Cost cost) {
  Action v = a;
  v.name = std::move(name);
  v.cost = cost;
  return v;
}

inline std::map<Cost, PropId> indexed_props(CompiledBuilder& b,
                                            const std::string& prefix,
                                            const std::vector<Cost>& values) {
  std::map<Cost, PropId> out;
  for (auto v : values) out[v] = b.fresh(prefix + std::to_string(v));
  return out;
}

inline Cost abs_diff(Cost a, Cost b) { return a > b ? a - b : b - a; }

}  // namespace detail

/// Number of different action costs: each action splits into a variant for
/// an already-used cost and one that marks its cost used and pays omega_d.
inline CompiledTask compile_count(const Task& task, const WeightScheme& scheme) {
  auto alphabet = cost_alphabet(task);
  detail::CompiledBuilder b(task);
  auto used = detail::indexed_props(b, "used_", alphabet.costs);

  for (const auto& a : task.actions()) {
    auto scaled = detail::checked_mul(scheme.cost_scale, a.cost);

    auto u = detail::variant(a, a.name + "__u", scaled);
    u.pre.push_back(pos(used.at(a.cost)));
    b.action(std::move(u), a.name);

    auto nu = detail::variant(a, a.name + "__nu",
                              detail::checked_add(scaled, scheme.omega_d));
    nu.pre.push_back(neg(used.at(a.cost)));
    nu.add.push_back(used.at(a.cost));
    b.action(std::move(nu), a.name);
  }
  for (auto p : task.init()) b.raw().init(p);
  for (auto l : task.goal()) b.raw().goal(l);

  auto origin = b.take_origin();
  return {std::move(b.raw()).build(), Metric::Count, scheme, DeltaMode::Strict,
          std::move(origin)};
}

/// Delta: tracks the previous action's cost and the largest jump so far.
/// Paper mode initializes prev_cost and max_delta to min(c(A)),
/// which charges a phantom jump from min(c(A)) into the first action. Strict
/// mode starts max_delta at 0 and gives the first action dedicated variants
/// that record its cost without emitting a jump.
inline CompiledTask compile_delta(const Task& task, const WeightScheme& scheme,
                                  DeltaMode mode = DeltaMode::Strict) {
  auto alphabet = cost_alphabet(task);
  auto abs = abs_set(alphabet);
  detail::CompiledBuilder b(task);
  auto prev = detail::indexed_props(b, "prev_cost_", alphabet.costs);
  auto delta = detail::indexed_props(b, "delta_", abs.values);
  auto max_delta = detail::indexed_props(b, "max_delta_", abs.values);
  auto check = b.fresh("check");
  auto end = b.fresh("end");
  std::optional<PropId> first;
  if (mode == DeltaMode::Strict) first = b.fresh("first");

  for (const auto& a : task.actions()) {
    auto scaled = detail::checked_mul(scheme.cost_scale, a.cost);
    if (first) {
      auto f = detail::variant(a, a.name + "__first", scaled);
      f.pre.push_back(pos(*first));
      f.pre.push_back(neg(check));
      f.del.push_back(*first);
      if (a.cost != alphabet.min()) {
        f.del.push_back(prev.at(alphabet.min()));
        f.add.push_back(prev.at(a.cost));
      }
      b.action(std::move(f), a.name);
    }
    for (auto i : alphabet.costs) {
      auto v = detail::variant(a, a.name + "__d" + std::to_string(i), scaled);
      v.pre.push_back(pos(prev.at(i)));
      v.pre.push_back(neg(check));
      if (first) v.pre.push_back(neg(*first));
      if (i != a.cost) {
        v.del.push_back(prev.at(i));
        v.add.push_back(prev.at(a.cost));
      }
      v.add.push_back(delta.at(detail::abs_diff(i, a.cost)));
      v.add.push_back(check);
      b.action(std::move(v), a.name);
    }
  }

  for (auto i : abs.values) {
    for (auto j : abs.values) {
      Action x;
      x.cost = 0;
      x.pre = {pos(check), pos(delta.at(i)), pos(max_delta.at(j))};
      x.del = {check, delta.at(i)};
      if (i > j) {
        x.name = "upd__" + std::to_string(i) + "_" + std::to_string(j);
        x.del.push_back(max_delta.at(j));
        x.add.push_back(max_delta.at(i));
      } else {
        x.name = "noupd__" + std::to_string(i) + "_" + std::to_string(j);
      }
      b.action(std::move(x), std::nullopt);
    }
  }

  for (auto i : abs.values) {
    Action e;
    e.name = "end__" + std::to_string(i);
    e.pre = task.goal();
    e.pre.push_back(neg(check));
    e.pre.push_back(pos(max_delta.at(i)));
    e.add = {end};
    e.cost = detail::checked_mul(i, scheme.omega_d);
    b.action(std::move(e), std::nullopt);
  }

  for (auto p : task.init()) b.raw().init(p);
  b.raw().init(prev.at(alphabet.min()));
  if (mode == DeltaMode::Paper) {
    b.raw().init(max_delta.at(alphabet.min()));
  } else {
    b.raw().init(max_delta.at(0));
    b.raw().init(*first);
  }
  b.raw().goal(pos(end));

  auto origin = b.take_origin();
  return {std::move(b.raw()).build(), Metric::Delta, scheme, mode, std::move(origin)};
}

/// Range: tracks the cheapest and the most expensive cost used so far,
/// starting from the inverted sentinels (min_cost = max(c(A)),
/// max_cost = min(c(A))).
inline CompiledTask compile_range(const Task& task, const WeightScheme& scheme) {
  auto alphabet = cost_alphabet(task);
  detail::CompiledBuilder b(task);
  auto min_cost = detail::indexed_props(b, "min_cost_", alphabet.costs);
  auto max_cost = detail::indexed_props(b, "max_cost_", alphabet.costs);
  auto end = b.fresh("end");

  for (const auto& a : task.actions()) {
    auto scaled = detail::checked_mul(scheme.cost_scale, a.cost);
    for (auto i : alphabet.costs) {
      for (auto j : alphabet.costs) {
        auto v = detail::variant(
            a, a.name + "__r" + std::to_string(i) + "_" + std::to_string(j), scaled);
        v.pre.push_back(pos(min_cost.at(i)));
        v.pre.push_back(pos(max_cost.at(j)));
        if (a.cost < i) {
          v.del.push_back(min_cost.at(i));
          v.add.push_back(min_cost.at(a.cost));
        }
        if (a.cost > j) {
          v.del.push_back(max_cost.at(j));
          v.add.push_back(max_cost.at(a.cost));
        }
        b.action(std::move(v), a.name);
      }
    }
  }

  for (auto i : alphabet.costs) {
    for (auto j : alphabet.costs) {
      Action e;
      e.name = "end__" + std::to_string(i) + "_" + std::to_string(j);
      e.pre = task.goal();
      e.pre.push_back(pos(min_cost.at(i)));
      e.pre.push_back(pos(max_cost.at(j)));
      e.add = {end};
      // Only the untouched sentinel pair (empty plan) has j < i.
      e.cost = detail::checked_mul(j > i ? j - i : 0, scheme.omega_d);
      b.action(std::move(e), std::nullopt);
    }
  }

  for (auto p : task.init()) b.raw().init(p);
  b.raw().init(min_cost.at(alphabet.max()));
  b.raw().init(max_cost.at(alphabet.min()));
  b.raw().goal(pos(end));

  auto origin = b.take_origin();
  return {std::move(b.raw()).build(), Metric::Range, scheme, DeltaMode::Strict,
          std::move(origin)};
}

inline CompiledTask compile(const Task& task, Metric metric,
                            const WeightScheme& scheme,
                            DeltaMode mode = DeltaMode::Strict) {
  for (const auto& a : task.actions()) {
    if (a.cost > kMaxActionCost) {
      throw InvalidTask("action '" + a.name + "': cost exceeds " +
                        std::to_string(kMaxActionCost) + " and cannot be compiled");
    }
  }
  switch (metric) {
    case Metric::Count: return compile_count(task, scheme);
    case Metric::Delta: return compile_delta(task, scheme, mode);
    case Metric::Range: return compile_range(task, scheme);
  }
  throw std::logic_error("unreachable");
}

inline CompiledTask compile(const Task& task, Metric metric, Order order,
                            DeltaMode mode = DeltaMode::Strict) {
  return compile(task, metric, make_scheme(order, task, metric), mode);
}

/// Largest jump charged by the paper-mode delta encoding: the walk starts
/// from min(c(A)) and max_delta starts at min(c(A)).
inline std::uint64_t paper_mode_delta(std::span<const Cost> v, Cost min_cost) {
  std::uint64_t best = min_cost;
  Cost prev = min_cost;
  for (auto c : v) {
    best = std::max<std::uint64_t>(best, detail::abs_diff(prev, c));
    prev = c;
  }
  return best;
}

/// Original action costs, recovered from the compiled actions: for every
/// origin, the cheapest variant costs exactly W * c(a).
inline std::map<std::string, Cost> original_costs(const CompiledTask& ct) {
  std::map<std::string, Cost> out;
  for (std::size_t i = 0; i < ct.origin.size(); ++i) {
    if (!ct.origin[i]) continue;
    auto c = ct.task.action(i).cost / ct.scheme.cost_scale;
    auto [it, inserted] = out.emplace(*ct.origin[i], c);
    if (!inserted) it->second = std::min(it->second, c);
  }
  return out;
}

struct Decoded {
  Plan plan;
  Cost cost = 0;
  std::uint64_t dispersion = 0;
};

/// Projects a compiled plan onto the original actions and splits its total
/// cost into (cost, dispersion). Throws DecodeMismatch if the split does not
/// agree with the metrics recomputed on the projected plan.
inline Decoded decode(const Plan& compiled_plan, const CompiledTask& ct) {
  auto ids = resolve(ct.task, compiled_plan);
  Cost total = 0;
  Decoded out;
  for (auto id : ids) {
    total = detail::checked_add(total, ct.task.action(id).cost);
    if (ct.origin.at(id)) out.plan.steps.push_back(*ct.origin[id]);
  }
  const auto& s = ct.scheme;
  if (s.order == Order::CostFirst) {
    out.cost = total / s.cost_scale;
    out.dispersion = total % s.cost_scale;
  } else {
    out.dispersion = total / s.omega_d;
    out.cost = total % s.omega_d;
  }

  auto costs = original_costs(ct);
  std::vector<Cost> v;
  v.reserve(out.plan.size());
  for (const auto& step : out.plan.steps) v.push_back(costs.at(step));
  Cost recomputed = 0;
  for (auto c : v) recomputed += c;

  if (s.order == Order::DispersionFirst && recomputed >= s.omega_d) {
    throw DecodeMismatch("plan cost " + std::to_string(recomputed) +
                         " reaches omega_d = " + std::to_string(s.omega_d));
  }
  if (recomputed != out.cost) {
    throw DecodeMismatch("decoded cost " + std::to_string(out.cost) +
                         " != recomputed " + std::to_string(recomputed));
  }
  auto d = dispersion(ct.metric, v);
  bool ok = (ct.metric == Metric::Delta && ct.delta_mode == DeltaMode::Paper)
                ? out.dispersion >= d
                : out.dispersion == d;
  if (!ok) {
    throw DecodeMismatch("decoded " + std::string(to_string(ct.metric)) + " " +
                         std::to_string(out.dispersion) + " vs recomputed " +
                         std::to_string(d));
  }
  return out;
}

}  // namespace uniplan
