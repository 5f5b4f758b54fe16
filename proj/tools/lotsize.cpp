#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lotsize/bench.hpp"
#include "lotsize/heuristic.hpp"
#include "lotsize/io.hpp"
#include "lotsize/sdp.hpp"
#include "lotsize/simulate.hpp"
#include "lotsize/testset.hpp"

namespace {

using namespace lotsize;

std::string param_string(int v) {
  return v == never_order ? "never" : std::to_string(v);
}

void print_policy(const PolicyParams& pol) {
  std::cout << "policy " << to_string(pol.kind) << "\n  s     ";
  for (int s : pol.s) std::cout << ' ' << param_string(s);
  std::cout << "\n  " << (pol.kind == PolicyKind::sS ? "level " : "q     ");
  for (int v : pol.level) std::cout << ' ' << v;
  std::cout << "\n";
}

void write_policy_csv(const PolicyParams& pol, double etc,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write: " + path);
  write_csv_row(out, {"period", "s", pol.kind == PolicyKind::sS ? "level" : "q",
                      "etc"});
  for (int t = 1; t <= pol.horizon(); ++t)
    write_csv_row(out, {std::to_string(t),
                        param_string(pol.s[static_cast<std::size_t>(t - 1)]),
                        std::to_string(pol.level[static_cast<std::size_t>(t - 1)]),
                        t == 1 ? detail::format_number(etc) : ""});
}

int effective_regions(const Instance& inst, int flag) {
  if (flag > 0) return flag;
  return inst.partitions > 0 ? inst.partitions : 10;
}

struct CommonArgs {
  std::string in, out, policy_out;
  int qmax = -2; ///< -2: keep instance value
  int partitions = 0;
  double budget = 0;
};

Instance load_with_overrides(const CommonArgs& a) {
  Instance inst = load_instance(a.in);
  if (a.qmax != -2) inst.qmax = a.qmax;
  inst.validate();
  return inst;
}

int cmd_solve(const CommonArgs& a, const std::string& method) {
  Instance inst = load_with_overrides(a);
  EnumOptions opts;
  if (a.budget > 0) opts.max_work = a.budget;
  PolicyParams pol;
  double etc = 0;
  if (method == "sS") {
    auto sol = solve_sS(inst, inst.qmax);
    pol = sol.policy;
    etc = sol.expected_cost;
  } else {
    if (inst.qmax < 1)
      throw validation_error("exact " + method +
                             " enumeration needs qmax >= 1");
    auto sol = method == "sQt" ? solve_sQt_enum(inst, inst.qmax, opts)
                               : solve_sQ_enum(inst, inst.qmax, opts);
    pol = sol.policy;
    etc = sol.expected_cost;
  }
  std::cout << "instance " << inst.id << "\nmethod " << method << "-SDP\n";
  print_policy(pol);
  std::cout << "etc " << detail::format_number(etc) << "\n";
  if (!a.out.empty()) write_policy_csv(pol, etc, a.out);
  if (!a.policy_out.empty()) save_policy(pol, a.policy_out);
  return 0;
}

int cmd_heuristic(const CommonArgs& a, const std::string& method) {
  Instance inst = load_with_overrides(a);
  const int regions = effective_regions(inst, a.partitions);
  PolicyParams pol = method == "sQt" ? heuristic_sQt(inst, regions)
                                     : heuristic_sQ(inst, regions);
  const double etc = evaluate_policy(inst, pol);
  std::cout << "instance " << inst.id << "\nmethod " << method
            << "-Heuristic\npartitions " << regions << "\n";
  print_policy(pol);
  std::cout << "etc " << detail::format_number(etc) << "\n";
  if (!a.out.empty()) write_policy_csv(pol, etc, a.out);
  if (!a.policy_out.empty()) save_policy(pol, a.policy_out);
  return 0;
}

int cmd_simulate(const CommonArgs& a, const std::string& method,
                 const std::string& policy_file, long long runs,
                 std::uint64_t seed, bool hold_first) {
  Instance inst = load_with_overrides(a);
  PolicyParams pol;
  if (!policy_file.empty()) {
    pol = load_policy(policy_file);
  } else if (method == "sS") {
    pol = solve_sS(inst, inst.qmax).policy;
  } else if (method == "sQt" || method == "sQ") {
    if (inst.qmax < 1)
      throw validation_error("exact " + method +
                             " enumeration needs qmax >= 1");
    pol = method == "sQt" ? solve_sQt_enum(inst, inst.qmax).policy
                          : solve_sQ_enum(inst, inst.qmax).policy;
  } else if (method == "sQt-heuristic" || method == "sQ-heuristic") {
    const int regions = effective_regions(inst, a.partitions);
    pol = method == "sQt-heuristic" ? heuristic_sQt(inst, regions)
                                    : heuristic_sQ(inst, regions);
  } else {
    throw validation_error("simulate needs --policy or a valid --method");
  }
  SimulateOptions opt;
  opt.hold_first_period = hold_first;
  auto rep = simulate_policy(inst, pol, runs, seed, opt);
  std::cout << "instance " << inst.id << "\nruns " << rep.runs << "\nseed "
            << rep.seed << "\nmean " << detail::format_number(rep.mean)
            << "\nstderr " << detail::format_number(rep.stderr_mean)
            << "\nci99 " << detail::format_number(rep.ci_half_width) << "\n";
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) throw validation_error("cannot write: " + a.out);
    write_csv_row(out, {"instance", "kind", "runs", "seed", "mean", "stderr",
                        "ci99"});
    write_csv_row(out, {inst.id, to_string(pol.kind), std::to_string(rep.runs),
                        std::to_string(rep.seed),
                        detail::format_number(rep.mean),
                        detail::format_number(rep.stderr_mean),
                        detail::format_number(rep.ci_half_width)});
  }
  return 0;
}

int cmd_gen(const std::string& out_dir, const std::string& set) {
  std::filesystem::create_directories(out_dir);
  std::vector<TestCase> cases;
  if (set == "6p" || set == "all")
    for (auto& tc : six_period_testset()) cases.push_back(std::move(tc));
  if (set == "25p" || set == "all")
    for (auto& tc : twentyfive_period_testset()) cases.push_back(std::move(tc));
  for (const auto& tc : cases) {
    const auto path = std::filesystem::path(out_dir) / (tc.inst.id + ".inst");
    if (std::filesystem::exists(path))
      throw validation_error("refusing to overwrite: " + path.string());
    save_instance(tc.inst, path.string());
  }
  std::cout << "wrote " << cases.size() << " instance files to " << out_dir
            << "\n";
  return 0;
}

int cmd_bench(const std::string& set, const std::string& dir,
              const std::string& methods_csv, int partitions, long long runs,
              std::uint64_t seed, double budget, const std::string& out,
              const std::string& summary_out) {
  std::vector<TestCase> cases;
  if (!dir.empty()) {
    std::vector<std::filesystem::path> paths;
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.path().extension() == ".inst") paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) {
      TestCase tc;
      tc.inst = load_instance(p.string());
      cases.push_back(std::move(tc));
    }
  } else if (set == "6p") {
    cases = six_period_testset();
  } else if (set == "25p") {
    cases = twentyfive_period_testset();
  } else {
    throw validation_error("bench needs --set 6p|25p or --dir");
  }

  BenchOptions opt;
  if (!methods_csv.empty()) {
    opt.methods.clear();
    std::istringstream ms(methods_csv);
    std::string tok;
    while (std::getline(ms, tok, ',')) {
      if (std::find(all_methods().begin(), all_methods().end(), tok) ==
          all_methods().end())
        throw validation_error("unknown method: " + tok);
      opt.methods.push_back(tok);
    }
  }
  if (partitions > 0) opt.n_regions = partitions;
  opt.sim_runs = runs;
  opt.seed = seed;
  if (budget > 0) opt.enum_opts.max_work = budget;

  auto results = run_experiment(cases, opt);
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw validation_error("cannot write: " + out);
    write_results_csv(results, os);
  }
  auto rows = summarize(results, {"pattern", "costset", "z", "rho", "K", "b"});
  if (!summary_out.empty()) {
    std::ofstream os(summary_out);
    if (!os) throw validation_error("cannot write: " + summary_out);
    write_summary_csv(rows, os);
  }
  for (const auto& s : rows)
    if (s.pivot.empty())
      std::cout << s.method << " avg gap " << s.avg_gap << "% over " << s.cells
                << " cells\n";
  return 0;
}

int cmd_curve(const CommonArgs& a, const std::string& kind, int t) {
  Instance inst = load_with_overrides(a);
  if (a.out.empty()) throw validation_error("curve needs --out");
  std::ofstream out(a.out);
  if (!out) throw validation_error("cannot write: " + a.out);
  const int T = inst.horizon();
  if (t < 1 || t > T) throw validation_error("period t outside horizon");
  const int regions = effective_regions(inst, a.partitions);

  auto quantity_plan = [&]() {
    if (inst.qmax >= 1) return solve_sQt_enum(inst, inst.qmax).q;
    return plan_order_quantities(inst, regions);
  };

  if (kind == "no-order-value") {
    auto sol = solve_sS(inst, inst.qmax);
    write_csv_row(out, {"x", "value"});
    for (int x = sol.grid.lo; x <= sol.grid.hi; ++x)
      write_csv_row(out, {std::to_string(x),
                          detail::format_number(sol.g(t, x))});
  } else if (kind == "stay-vs-order" || kind == "delta-vs-threshold") {
    auto q = quantity_plan();
    auto tab = evaluate_fixed_q(inst, q);
    const int qt = q[static_cast<std::size_t>(t - 1)];
    if (kind == "stay-vs-order") {
      write_csv_row(out, {"x", "stay", "order"});
      for (int x = tab.grid.lo; x + qt <= tab.grid.hi; ++x)
        write_csv_row(out, {std::to_string(x),
                            detail::format_number(tab.no_order(t, x)),
                            detail::format_number(tab.order(t, x))});
    } else {
      const double threshold = order_cost(inst.costs, qt);
      write_csv_row(out, {"x", "delta", "threshold"});
      for (int x = tab.grid.lo; x + qt <= tab.grid.hi; ++x)
        write_csv_row(out, {std::to_string(x),
                            detail::format_number(tab.delta_j(t, x)),
                            detail::format_number(threshold)});
    }
  } else if (kind == "q-scan") {
    int cap = inst.qmax >= 1 ? inst.qmax : total_demand_bound(inst);
    write_csv_row(out, {"q", "value"});
    for (int Q = 1; Q <= cap; ++Q) {
      std::vector<int> plan(static_cast<std::size_t>(T), Q);
      auto tab = evaluate_fixed_q(inst, plan);
      write_csv_row(out, {std::to_string(Q),
                          detail::format_number(tab.value(1, inst.x0))});
    }
  } else if (kind == "exact-vs-approx") {
    auto q = quantity_plan();
    auto tab = evaluate_fixed_q(inst, q);
    const int span = total_demand_bound(inst);
    const int lo = std::max(std::min(inst.x0, -span) - 2, tab.grid.lo);
    const int hi = std::min(std::max(inst.x0, span) + 2, tab.grid.hi);
    auto approx =
        ApproxCostTable::build(CycleCostTables::build(inst, regions), q, lo, hi);
    write_csv_row(out, {"x", "exact", "approx"});
    for (int x = lo; x <= hi; ++x)
      write_csv_row(out, {std::to_string(x),
                          detail::format_number(tab.no_order(t, x)),
                          detail::format_number(approx.value(t, x))});
  } else {
    throw validation_error(
        "kind must be one of no-order-value, stay-vs-order, "
        "delta-vs-threshold, q-scan, exact-vs-approx");
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver and test harness for nonstationary (s,Q)-type "
               "inventory policies"};
  app.require_subcommand(1);

  CommonArgs a;
  std::string method, kind, policy_file, set = "all", dir, methods_csv;
  std::string out_dir, summary_out;
  long long runs = 500000;
  std::uint64_t seed = 1;
  int t = 1;
  bool hold_first = false;

  auto add_common = [&](CLI::App* cmd, bool with_qmax = true) {
    cmd->add_option("--in", a.in, "instance file")->required();
    cmd->add_option("--out", a.out, "CSV output path");
    if (with_qmax)
      cmd->add_option("--qmax", a.qmax, "override the instance order cap");
  };

  auto* solve = app.add_subcommand("solve", "exact policy optimization");
  add_common(solve);
  solve->add_option("--method", method, "sS, sQt or sQ")
      ->default_val("sS")
      ->check(CLI::IsMember({"sS", "sQt", "sQ"}));
  solve->add_option("--budget", a.budget, "enumeration work budget");
  solve->add_option("--policy-out", a.policy_out, "write the policy file");

  auto* heur = app.add_subcommand("heuristic", "two-step policy construction");
  add_common(heur);
  heur->add_option("--method", method, "sQt or sQ")
      ->default_val("sQt")
      ->check(CLI::IsMember({"sQt", "sQ"}));
  heur->add_option("--partitions", a.partitions,
                   "piecewise regions (default: instance file, else 10)");
  heur->add_option("--policy-out", a.policy_out, "write the policy file");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo policy evaluation");
  add_common(sim);
  sim->add_option("--policy", policy_file, "policy file to evaluate");
  sim->add_option("--method", method,
                  "solve first: sS, sQt, sQ, sQt-heuristic, sQ-heuristic");
  sim->add_option("--runs", runs, "simulation runs")->default_val(500000);
  sim->add_option("--seed", seed, "RNG seed")->default_val(1);
  sim->add_option("--partitions", a.partitions, "piecewise regions");
  sim->add_flag("--hold-first", hold_first, "suppress the period-1 order");

  auto* gen = app.add_subcommand("gen", "write the benchmark instance files");
  gen->add_option("--out-dir", out_dir, "output directory")->required();
  gen->add_option("--set", set, "6p, 25p or all")->default_val("all");

  auto* bench = app.add_subcommand("bench", "run methods over a test set");
  bench->add_option("--set", set, "6p or 25p")->default_val("");
  bench->add_option("--dir", dir, "directory of .inst files");
  bench->add_option("--methods", methods_csv,
                    "comma list: sS-SDP,sQt-SDP,sQ-SDP,sQt-Heuristic,"
                    "sQ-Heuristic");
  bench->add_option("--partitions", a.partitions, "piecewise regions");
  bench->add_option("--runs", runs,
                    "simulation runs for heuristic cells (0 = exact)")
      ->default_val(500000);
  bench->add_option("--seed", seed, "RNG seed")->default_val(1);
  bench->add_option("--budget", a.budget, "enumeration work budget");
  bench->add_option("--out", a.out, "per-cell results CSV");
  bench->add_option("--summary", summary_out, "pivot summary CSV");

  auto* curve = app.add_subcommand("curve", "emit plottable value curves");
  add_common(curve);
  curve->add_option("--kind", kind,
                    "no-order-value, stay-vs-order, delta-vs-threshold, "
                    "q-scan, exact-vs-approx")
      ->required();
  curve->add_option("--t", t, "period of the curve")->default_val(1);
  curve->add_option("--partitions", a.partitions, "piecewise regions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(a, method);
    if (heur->parsed()) return cmd_heuristic(a, method);
    if (sim->parsed())
      return cmd_simulate(a, method, policy_file, runs, seed, hold_first);
    if (gen->parsed()) return cmd_gen(out_dir, set);
    if (bench->parsed())
      return cmd_bench(set, dir, methods_csv, a.partitions, runs, seed,
                       a.budget, a.out, summary_out);
    if (curve->parsed()) return cmd_curve(a, kind, t);
  } catch (const budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
