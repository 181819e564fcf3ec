// uniplan: compile, solve, decode, generate, check and benchmark
// uniform-cost planning tasks.
//
// Exit codes: 0 ok, 1 usage/other, 2 parse error, 3 bound violation,
// 4 decode mismatch, 5 invalid plan, 6 oracle mismatch, 7 oracle incomplete,
// 10 unsolvable, 11 resource limit.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uniplan/uniplan.hpp"

namespace fs = std::filesystem;
using namespace uniplan;

namespace {

enum Exit {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kBound = 3,
  kDecode = 4,
  kInvalidPlan = 5,
  kOracleMismatch = 6,
  kOracleIncomplete = 7,
  kUnsolvable = 10,
  kResourceLimit = 11,
};

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write '" + path + "'");
  out << text;
}

Task load_task(const std::string& path) {
  try {
    return parse_task(read_file(path));
  } catch (const ParseError&) {
    std::cerr << path << ": ";
    throw;
  }
}

std::string sibling(const std::string& path, std::string_view suffix,
                    std::string_view replacement) {
  if (path.size() >= suffix.size() &&
      path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return path.substr(0, path.size() - suffix.size()) + std::string(replacement);
  }
  return path + std::string(replacement);
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("UNIPLAN_SEED")) return std::stoull(s);
  return 1;
}

std::string csv_row(const MetricReport& m) {
  std::ostringstream os;
  os << m.cost << ',' << m.count << ',' << m.delta << ',' << m.range << ','
     << detail::fixed(m.stddev, 4);
  return os.str();
}

// --- compile ---------------------------------------------------------------

struct CompileArgs {
  std::string in, out, meta, metric = "count", order = "cd", delta_mode = "strict";
};

int cmd_compile(const CompileArgs& a) {
  auto task = load_task(a.in);
  auto metric = parse_metric(a.metric);
  auto scheme = make_scheme(parse_order(a.order), task, metric);
  auto ct = compile(task, metric, scheme, parse_delta_mode(a.delta_mode));
  auto meta = a.meta.empty() ? sibling(a.out, ".task.json", ".meta.json") : a.meta;
  write_file(a.out, serialize_task(ct.task));
  write_file(meta, serialize_meta(ct));
  if (!scheme.warning.empty()) std::cerr << "warning: " << scheme.warning << "\n";
  std::cout << "|A'| = " << ct.task.actions().size() << "\n"
            << "|F'| = " << ct.task.num_props() << "\n"
            << "scheme: metric=" << to_string(metric) << " order=" << to_string(scheme.order)
            << " W=" << scheme.cost_scale << " omega_d=" << scheme.omega_d;
  if (metric == Metric::Delta) std::cout << " delta_mode=" << to_string(ct.delta_mode);
  std::cout << "\n";
  return kOk;
}

// --- solve / decode ----------------------------------------------------------

struct SolveArgs {
  std::string task, meta, plan, original_plan, heuristic = "hmax";
  std::uint64_t max_expansions = 0;
  double max_seconds = 0;
};

int cmd_solve(const SolveArgs& a) {
  auto task = load_task(a.task);
  std::optional<CompiledTask> ct;
  if (!a.meta.empty()) ct = parse_meta(read_file(a.meta), task);

  SearchLimits limits;
  if (a.max_expansions > 0) limits.max_expansions = a.max_expansions;
  if (a.max_seconds > 0) limits.max_seconds = a.max_seconds;
  auto res = astar(task, parse_heuristic(a.heuristic), limits);
  std::cout << "outcome: " << to_string(res.outcome) << "\n"
            << "expanded: " << res.stats.expanded << "\n"
            << "generated: " << res.stats.generated << "\n";
  if (res.outcome == Outcome::Unsolvable) return kUnsolvable;
  if (res.outcome == Outcome::ResourceLimit) return kResourceLimit;

  std::cout << "cost: " << res.cost << "\n";
  auto plan_path = a.plan.empty() ? sibling(a.task, ".task.json", ".plan") : a.plan;
  write_file(plan_path, serialize_plan(res.plan, task));
  if (ct) {
    auto d = decode(res.plan, *ct);
    std::cout << "decoded: cost=" << d.cost << " " << to_string(ct->metric) << "="
              << d.dispersion << "\n";
    auto orig = a.original_plan.empty() ? sibling(plan_path, ".plan", ".original.plan")
                                        : a.original_plan;
    std::string text;
    for (const auto& s : d.plan.steps) text += s + "\n";
    text += "; cost = " + std::to_string(d.cost) + "\n";
    write_file(orig, text);
  }
  return kOk;
}

struct DecodeArgs {
  std::string task, meta, plan, out;
};

int cmd_decode(const DecodeArgs& a) {
  auto task = load_task(a.task);
  auto ct = parse_meta(read_file(a.meta), task);
  auto plan = parse_plan(read_file(a.plan));
  if (!validate(ct.task, plan)) {
    std::cerr << "error: plan is not valid for the compiled task\n";
    return kInvalidPlan;
  }
  auto d = decode(plan, ct);
  std::cout << "cost=" << d.cost << " " << to_string(ct.metric) << "=" << d.dispersion
            << "\n";
  std::string text;
  for (const auto& s : d.plan.steps) text += s + "\n";
  text += "; cost = " + std::to_string(d.cost) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_file(a.out, text);
  }
  return kOk;
}

// --- metrics -----------------------------------------------------------------

int cmd_metrics(const std::string& task_path, const std::string& plan_path) {
  auto task = load_task(task_path);
  auto plan = parse_plan(read_file(plan_path));
  if (!validate(task, plan)) {
    std::cerr << "error: invalid plan\n";
    return kInvalidPlan;
  }
  std::cout << csv_row(report(task, plan)) << "\n";
  return kOk;
}

// --- generate ----------------------------------------------------------------

struct GenerateArgs {
  std::string spec, out, out_dir;
  std::size_t count = 10, rows = 3, cols = 4, horizon = 4, levels = 3;
  Cost max_cost = 4, unit = 100;
  std::optional<std::uint64_t> seed;
};

int cmd_generate_nav(const GenerateArgs& a) {
  auto spec = parse_nav_spec(nlohmann::json::parse(read_file(a.spec)));
  write_file(a.out, serialize_task(gen_navigation(spec)));
  return kOk;
}

int cmd_generate_finance(const GenerateArgs& a) {
  auto spec = parse_finance_spec(nlohmann::json::parse(read_file(a.spec)));
  write_file(a.out, serialize_task(gen_finance(spec)));
  return kOk;
}

int cmd_generate_suite(const GenerateArgs& a, bool nav) {
  std::mt19937_64 rng(a.seed.value_or(default_seed()));
  fs::create_directories(a.out_dir);
  for (std::size_t i = 0; i < a.count; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "%s-%03zu", nav ? "nav" : "finance", i);
    auto base = (fs::path(a.out_dir) / name).string();
    if (nav) {
      auto spec = random_nav_spec(a.rows, a.cols, a.max_cost, rng);
      write_file(base + ".spec.json", to_json(spec).dump(2) + "\n");
      write_file(base + ".task.json", serialize_task(gen_navigation(spec)));
    } else {
      auto spec = random_finance_spec(a.horizon, a.levels, a.unit, rng);
      write_file(base + ".spec.json", to_json(spec).dump(2) + "\n");
      write_file(base + ".task.json", serialize_task(gen_finance(spec)));
    }
  }
  std::cout << "wrote " << a.count << " instances to " << a.out_dir << "\n";
  return kOk;
}

// --- oracle ------------------------------------------------------------------

struct OracleArgs {
  std::string task, heuristic = "hmax", delta_mode = "strict";
  std::size_t max_states = 2'000'000;
  bool check = false;
};

int cmd_oracle(const OracleArgs& a) {
  auto task = load_task(a.task);
  EnumerationLimits limits;
  limits.max_states = a.max_states;
  auto e = enumerate_simple_plans(task, limits);
  std::cout << "reachable_states: " << e.reachable_states << "\n"
            << "simple_plans: " << e.plans.size() << "\n"
            << "complete: " << (e.complete ? "true" : "false") << "\n";
  if (e.plans.empty()) {
    std::cout << "unsolvable\n";
    return e.complete ? kUnsolvable : kOracleIncomplete;
  }
  auto mode = parse_delta_mode(a.delta_mode);
  bool ok = true;
  for (auto metric : {Metric::Count, Metric::Delta, Metric::Range}) {
    for (auto order : {Order::CostFirst, Order::DispersionFirst}) {
      DispersionFn fn;
      if (metric == Metric::Delta && mode == DeltaMode::Paper) {
        auto min_cost = cost_alphabet(task).min();
        fn = [min_cost](std::span<const Cost> v) { return paper_mode_delta(v, min_cost); };
      }
      auto lm = lex_min(task, e.plans, metric, order, fn);
      std::cout << to_string(metric) << "_" << to_string(order) << ": cost=" << lm.cost
                << " dispersion=" << lm.dispersion << " plans=" << lm.plans.size();
      if (a.check) {
        auto ct = compile(task, metric, order, mode);
        auto res = astar(ct.task, parse_heuristic(a.heuristic));
        if (res.outcome != Outcome::Solved) {
          std::cout << " compiled=" << to_string(res.outcome) << " FAIL";
          ok = false;
        } else {
          auto d = decode(res.plan, ct);
          bool match = d.cost == lm.cost && d.dispersion == lm.dispersion;
          std::cout << " compiled: cost=" << d.cost << " dispersion=" << d.dispersion
                    << (match ? " PASS" : " FAIL");
          ok = ok && match;
        }
      }
      std::cout << "\n";
    }
  }
  if (!e.complete) return kOracleIncomplete;
  return ok ? kOk : kOracleMismatch;
}

// --- bench -------------------------------------------------------------------

struct BenchArgs {
  std::string dir, out, summary, heuristic = "hmax", delta_mode = "strict";
  std::vector<std::string> approaches;
  double budget = 60;
  unsigned jobs = 1;
};

int cmd_bench(const BenchArgs& a) {
  BenchOptions opt;
  if (!a.approaches.empty()) {
    for (const auto& x : a.approaches) {
      if (!is_approach(x)) {
        std::cerr << "error: unknown approach '" << x << "'\n";
        return kUsage;
      }
    }
    opt.approaches = a.approaches;
  }
  opt.budget_seconds = a.budget;
  opt.heuristic = parse_heuristic(a.heuristic);
  opt.delta_mode = parse_delta_mode(a.delta_mode);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.dir)) {
    auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > 10 &&
        name.ends_with(".task.json")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, std::optional<Task>>> instances;
  for (const auto& f : files) {
    auto name = f.filename().string();
    auto id = name.substr(0, name.size() - std::string_view(".task.json").size());
    try {
      instances.emplace_back(id, parse_task(read_file(f.string())));
    } catch (const std::exception& e) {
      std::cerr << "warning: " << f.string() << ": " << e.what() << "\n";
      instances.emplace_back(id, std::nullopt);
    }
  }
  auto csv = to_csv(run_bench(instances, opt, a.jobs));
  write_file(a.out, csv);
  auto summary_path = a.summary.empty() ? sibling(a.out, ".csv", ".summary.csv") : a.summary;
  write_file(summary_path, to_csv(summarize(parse_bench_csv(csv))));
  std::cout << "instances: " << instances.size() << "\n"
            << "records: " << a.out << "\n"
            << "summary: " << summary_path << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform-cost planning toolkit"};
  app.require_subcommand(1);

  CompileArgs compile_args;
  auto* compile_cmd = app.add_subcommand("compile", "Compile a task for (cost, dispersion)");
  compile_cmd->add_option("input", compile_args.in, "Task file")->required();
  compile_cmd->add_option("--metric", compile_args.metric)
      ->check(CLI::IsMember({"count", "delta", "range"}));
  compile_cmd->add_option("--order", compile_args.order)->check(CLI::IsMember({"cd", "dc"}));
  compile_cmd->add_option("--delta-mode", compile_args.delta_mode)
      ->check(CLI::IsMember({"paper", "strict"}));
  compile_cmd->add_option("-o,--out", compile_args.out, "Compiled task file")->required();
  compile_cmd->add_option("--meta", compile_args.meta,
                          "Sidecar file (default: <out>.meta.json)");

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a task optimally with A*");
  solve_cmd->add_option("task", solve_args.task)->required();
  solve_cmd->add_option("meta", solve_args.meta, "Sidecar of a compiled task");
  solve_cmd->add_option("--heuristic", solve_args.heuristic)
      ->check(CLI::IsMember({"blind", "hmax"}));
  solve_cmd->add_option("--max-expansions", solve_args.max_expansions);
  solve_cmd->add_option("--max-seconds", solve_args.max_seconds);
  solve_cmd->add_option("--plan", solve_args.plan, "Plan output file");
  solve_cmd->add_option("--original-plan", solve_args.original_plan,
                        "Projected original plan output (with meta)");

  DecodeArgs decode_args;
  auto* decode_cmd = app.add_subcommand("decode", "Decode a compiled plan");
  decode_cmd->add_option("task", decode_args.task, "Compiled task")->required();
  decode_cmd->add_option("meta", decode_args.meta)->required();
  decode_cmd->add_option("plan", decode_args.plan)->required();
  decode_cmd->add_option("-o,--out", decode_args.out);

  std::string metrics_task, metrics_plan;
  auto* metrics_cmd = app.add_subcommand("metrics", "Print cost,#,delta,range,stddev of a plan");
  metrics_cmd->add_option("task", metrics_task)->required();
  metrics_cmd->add_option("plan", metrics_plan)->required();

  GenerateArgs gen_args;
  auto* gen_cmd = app.add_subcommand("generate", "Generate benchmark tasks");
  gen_cmd->require_subcommand(1);
  auto* gen_nav = gen_cmd->add_subcommand("nav", "Navigation task from a spec file");
  gen_nav->add_option("spec", gen_args.spec)->required();
  gen_nav->add_option("-o,--out", gen_args.out)->required();
  auto* gen_fin = gen_cmd->add_subcommand("finance", "Finance task from a spec file");
  gen_fin->add_option("spec", gen_args.spec)->required();
  gen_fin->add_option("-o,--out", gen_args.out)->required();
  auto* gen_nav_suite = gen_cmd->add_subcommand("nav-suite", "Random navigation suite");
  auto* gen_fin_suite = gen_cmd->add_subcommand("finance-suite", "Random finance suite");
  for (auto* c : {gen_nav_suite, gen_fin_suite}) {
    c->add_option("-o,--out-dir", gen_args.out_dir)->required();
    c->add_option("--count", gen_args.count);
    c->add_option("--seed", gen_args.seed, "Default: $UNIPLAN_SEED or 1");
  }
  gen_nav_suite->add_option("--rows", gen_args.rows);
  gen_nav_suite->add_option("--cols", gen_args.cols);
  gen_nav_suite->add_option("--max-cost", gen_args.max_cost);
  gen_fin_suite->add_option("--horizon", gen_args.horizon);
  gen_fin_suite->add_option("--levels", gen_args.levels);
  gen_fin_suite->add_option("--unit", gen_args.unit);

  OracleArgs oracle_args;
  auto* oracle_cmd = app.add_subcommand("oracle", "Enumerate simple plans and report lex minima");
  auto* check_cmd = app.add_subcommand(
      "oracle-check", "Compare compiled solutions against the oracle's lex minima");
  for (auto* c : {oracle_cmd, check_cmd}) {
    c->add_option("task", oracle_args.task)->required();
    c->add_option("--max-states", oracle_args.max_states);
    c->add_option("--delta-mode", oracle_args.delta_mode)
        ->check(CLI::IsMember({"paper", "strict"}));
    c->add_option("--heuristic", oracle_args.heuristic)
        ->check(CLI::IsMember({"blind", "hmax"}));
  }

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Run the approach matrix over a directory");
  bench_cmd->add_option("dir", bench_args.dir, "Directory of *.task.json")->required();
  bench_cmd->add_option("--approaches", bench_args.approaches)->delimiter(',');
  bench_cmd->add_option("--budget", bench_args.budget, "Seconds per run");
  bench_cmd->add_option("-o,--out", bench_args.out)->required();
  bench_cmd->add_option("--summary", bench_args.summary);
  bench_cmd->add_option("--jobs", bench_args.jobs);
  bench_cmd->add_option("--heuristic", bench_args.heuristic)
      ->check(CLI::IsMember({"blind", "hmax"}));
  bench_cmd->add_option("--delta-mode", bench_args.delta_mode)
      ->check(CLI::IsMember({"paper", "strict"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*compile_cmd) return cmd_compile(compile_args);
    if (*solve_cmd) return cmd_solve(solve_args);
    if (*decode_cmd) return cmd_decode(decode_args);
    if (*metrics_cmd) return cmd_metrics(metrics_task, metrics_plan);
    if (*gen_nav) return cmd_generate_nav(gen_args);
    if (*gen_fin) return cmd_generate_finance(gen_args);
    if (*gen_nav_suite) return cmd_generate_suite(gen_args, true);
    if (*gen_fin_suite) return cmd_generate_suite(gen_args, false);
    if (*oracle_cmd) return cmd_oracle(oracle_args);
    if (*check_cmd) {
      oracle_args.check = true;
      return cmd_oracle(oracle_args);
    }
    if (*bench_cmd) return cmd_bench(bench_args);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const BoundViolation& e) {
    std::cerr << "bound violation: " << e.what() << "\n";
    return kBound;
  } catch (const DecodeMismatch& e) {
    std::cerr << "decode mismatch: " << e.what() << "\n";
    return kDecode;
  } catch (const UnknownAction& e) {
    std::cerr << "invalid plan: " << e.what() << "\n";
    return kInvalidPlan;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
