#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lotsize/core.hpp"
#include "lotsize/heuristic.hpp"
#include "lotsize/io.hpp"
#include "lotsize/sdp.hpp"
#include "lotsize/simulate.hpp"
#include "lotsize/testset.hpp"

namespace lotsize {

inline const std::vector<std::string>& all_methods() {
  static const std::vector<std::string> m = {
      "sS-SDP", "sQt-SDP", "sQ-SDP", "sQt-Heuristic", "sQ-Heuristic"};
  return m;
}

struct MethodRun {
  std::string method;
  PolicyParams policy;
  double etc = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0;
  bool skipped = false;
  std::string note;
};

struct CaseResult {
  TestCase tc;
  double benchmark = std::numeric_limits<double>::quiet_NaN();
  std::vector<MethodRun> runs;
};

struct BenchOptions {
  std::vector<std::string> methods = all_methods();
  int n_regions = 10;
  long long sim_runs = 0; ///< 0: heuristic costs from exact evaluation
  std::uint64_t seed = 1;
  EnumOptions enum_opts;
};

/// Runs the requested methods on one instance.  The benchmark is always the
/// order-up-to optimum under the instance's order cap; every other cost is
/// expressed as a percent gap against it.  Heuristic policies are costed by
/// simulation when sim_runs is positive, else by exact evaluation.  Cells
/// whose exact solve needs an order cap it does not have, or exceeds the
/// enumeration budget, are marked skipped.
inline CaseResult run_methods(const TestCase& tc, const BenchOptions& opt) {
  const Instance& inst = tc.inst;
  CaseResult out;
  out.tc = tc;
  const int regions = inst.partitions > 0 ? inst.partitions : opt.n_regions;

  auto timed = [](auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
  };

  double bench_seconds = timed([&] {
    out.benchmark = solve_sS(inst, inst.qmax).expected_cost;
  });

  auto heuristic_cost = [&](const PolicyParams& pol) {
    if (opt.sim_runs > 0)
      return simulate_policy(inst, pol, opt.sim_runs, opt.seed).mean;
    return evaluate_policy(inst, pol);
  };

  for (const auto& method : opt.methods) {
    MethodRun run;
    run.method = method;
    try {
      if (method == "sS-SDP") {
        run.seconds = bench_seconds;
        auto sol = solve_sS(inst, inst.qmax);
        run.policy = sol.policy;
        run.etc = sol.expected_cost;
      } else if (method == "sQt-SDP" || method == "sQ-SDP") {
        if (inst.qmax < 1) {
          run.skipped = true;
          run.note = "needs an order cap (qmax) for exact enumeration";
        } else {
          run.seconds = timed([&] {
            auto sol = method == "sQt-SDP"
                           ? solve_sQt_enum(inst, inst.qmax, opt.enum_opts)
                           : solve_sQ_enum(inst, inst.qmax, opt.enum_opts);
            run.policy = sol.policy;
            run.etc = sol.expected_cost;
          });
        }
      } else if (method == "sQt-Heuristic") {
        run.seconds = timed([&] {
          run.policy = heuristic_sQt(inst, regions);
          run.etc = heuristic_cost(run.policy);
        });
      } else if (method == "sQ-Heuristic") {
        run.seconds = timed([&] {
          run.policy = heuristic_sQ(inst, regions);
          run.etc = heuristic_cost(run.policy);
        });
      } else {
        throw validation_error("unknown method: " + method);
      }
    } catch (const budget_error& e) {
      run.skipped = true;
      run.note = e.what();
    }
    if (!run.skipped) run.gap = optimality_gap(out.benchmark, run.etc);
    out.runs.push_back(std::move(run));
  }
  return out;
}

/// Runs every case, fanning out over LOTSIZE_THREADS workers.  Results come
/// back in case order regardless of scheduling.
inline std::vector<CaseResult> run_experiment(const std::vector<TestCase>& cases,
                                              const BenchOptions& opt) {
  std::vector<CaseResult> results(cases.size());
  const int workers = std::max(
      1, std::min<int>(worker_count(), static_cast<int>(cases.size())));
  auto work = [&](int w) {
    for (std::size_t i = static_cast<std::size_t>(w); i < cases.size();
         i += static_cast<std::size_t>(workers))
      results[i] = run_methods(cases[i], opt);
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  return results;
}

namespace detail {

inline std::string tag_of(const CaseResult& r, const std::string& key) {
  auto it = r.tc.tags.find(key);
  return it == r.tc.tags.end() ? std::string() : it->second;
}

inline std::string format_cell(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

} // namespace detail

/// Per-method-run rows: one line per (instance, method) cell.
inline void write_results_csv(const std::vector<CaseResult>& results,
                              std::ostream& out) {
  write_csv_row(out, {"instance", "set", "pattern", "costset", "K", "b", "z",
                      "rho", "method", "etc", "gap", "seconds", "skipped",
                      "note"});
  for (const auto& r : results)
    for (const auto& run : r.runs)
      write_csv_row(
          out, {r.tc.inst.id, detail::tag_of(r, "set"),
                detail::tag_of(r, "pattern"), detail::tag_of(r, "costset"),
                detail::tag_of(r, "K"), detail::tag_of(r, "b"),
                detail::tag_of(r, "z"), detail::tag_of(r, "rho"), run.method,
                detail::format_cell(run.etc), detail::format_cell(run.gap),
                detail::format_cell(run.seconds),
                run.skipped ? "yes" : "no", run.note});
}

struct SummaryRow {
  std::string pivot, group, method;
  double avg_gap = 0;
  int cells = 0;
};

/// Average gaps pivoted by each tag key: one row per (pivot value, method),
/// skipped cells excluded, plus an overall average per method.
inline std::vector<SummaryRow> summarize(const std::vector<CaseResult>& results,
                                         const std::vector<std::string>& pivots) {
  std::vector<SummaryRow> rows;
  auto accumulate = [&](const std::string& pivot, const std::string& group) {
    for (const auto& r : results) {
      if (!pivot.empty() && detail::tag_of(r, pivot) != group) continue;
      for (const auto& run : r.runs) {
        if (run.skipped) continue;
        auto it = std::find_if(rows.begin(), rows.end(), [&](const SummaryRow& s) {
          return s.pivot == pivot && s.group == group && s.method == run.method;
        });
        if (it == rows.end()) {
          rows.push_back({pivot, group, run.method, 0, 0});
          it = rows.end() - 1;
        }
        it->avg_gap += run.gap;
        it->cells += 1;
      }
    }
  };
  for (const auto& pivot : pivots) {
    std::vector<std::string> seen;
    for (const auto& r : results) {
      const std::string g = detail::tag_of(r, pivot);
      if (g.empty() || std::find(seen.begin(), seen.end(), g) != seen.end())
        continue;
      seen.push_back(g);
      accumulate(pivot, g);
    }
  }
  accumulate("", "all");
  for (auto& s : rows)
    if (s.cells) s.avg_gap /= s.cells;
  return rows;
}

inline void write_summary_csv(const std::vector<SummaryRow>& rows,
                              std::ostream& out) {
  write_csv_row(out, {"pivot", "group", "method", "avg_gap", "cells"});
  for (const auto& s : rows)
    write_csv_row(out, {s.pivot.empty() ? "overall" : s.pivot, s.group,
                        s.method, detail::format_cell(s.avg_gap),
                        std::to_string(s.cells)});
}

} // namespace lotsize
