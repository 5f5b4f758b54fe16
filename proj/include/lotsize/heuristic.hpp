#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "lotsize/core.hpp"
#include "lotsize/demand.hpp"
#include "lotsize/instance.hpp"
#include "lotsize/partition.hpp"
#include "lotsize/sdp.hpp"

namespace lotsize {

/// Parameters of the panning binary search for a false-to-true crossing.
struct SearchConfig {
  int x0 = 0;       ///< initial probe
  int w = 8;        ///< pan step, at least 2
  int max_pan = 64; ///< pans before falling back to a linear scan
};

struct SearchOutcome {
  int value = 0;              ///< smallest x in range satisfying the predicate
  bool found = false;         ///< false when the predicate never turned true
  bool linear_fallback = false;
  bool non_monotone = false;  ///< predicate seen violating false-to-true order
};

/// Locates the smallest x in [lo, hi] with ok(x) true, assuming ok switches
/// from false to true once.  Pans from cfg.x0 in steps of cfg.w to bracket
/// the switch, then bisects.  If the predicate is not monotone the bracketed
/// crossing may not be the first one; a cheap lower-end check catches that
/// case and rescans linearly so the returned x is always the smallest.
template <class Pred>
SearchOutcome find_threshold_crossing(Pred&& ok, SearchConfig cfg, int lo,
                                      int hi) {
  if (cfg.w < 2) throw validation_error("search step w must be at least 2");
  if (lo > hi) throw validation_error("empty search range");
  SearchOutcome out;

  auto linear_scan = [&](int from, int to) {
    for (int x = from; x <= to; ++x)
      if (ok(x)) {
        out.value = x;
        out.found = true;
        return;
      }
    out.value = to;
    out.found = false;
  };

  auto bisect = [&](int f, int t) { // ok(f) false, ok(t) true
    while (t - f > 1) {
      const int m = f + (t - f) / 2;
      (ok(m) ? t : f) = m;
    }
    return t;
  };

  int x = std::clamp(cfg.x0, lo, hi);
  int pans = 0;
  bool ran_out = false;
  if (ok(x)) {
    int known_true = x;
    while (x > lo) {
      if (++pans > cfg.max_pan) {
        ran_out = true;
        break;
      }
      x = std::max(lo, x - cfg.w);
      if (!ok(x)) break;
      known_true = x;
    }
    if (ran_out) {
      out.linear_fallback = true;
      linear_scan(lo, hi);
      return out;
    }
    out.found = true;
    out.value = (x == known_true) ? known_true : bisect(x, known_true);
  } else {
    int known_false = x;
    bool bracketed = false;
    while (x < hi) {
      if (++pans > cfg.max_pan) {
        ran_out = true;
        break;
      }
      x = std::min(hi, x + cfg.w);
      if (ok(x)) {
        bracketed = true;
        break;
      }
      known_false = x;
    }
    if (ran_out) {
      out.linear_fallback = true;
      linear_scan(lo, hi);
      return out;
    }
    if (!bracketed) {
      out.value = hi;
      out.found = false;
      return out;
    }
    out.found = true;
    out.value = bisect(known_false, x);
  }

  if (out.found && out.value > lo && ok(lo)) {
    // crossing below the bracket: predicate was not monotone
    out.non_monotone = true;
    linear_scan(lo, out.value);
  }
  return out;
}

namespace detail {

/// Sequential evaluator over nondecreasing query points, amortised O(1).
struct PiecewiseWalker {
  const PiecewiseLinear& f;
  std::size_t seg = 0;

  double at(double x) {
    if (f.bp.empty()) return 0.0;
    if (x < f.bp.front())
      return f.val.front() + f.slope_left * (x - f.bp.front());
    while (seg + 1 < f.bp.size() && f.bp[seg + 1] <= x) ++seg;
    return f.val[seg] + f.slope[seg] * (x - f.bp[seg]);
  }
};

/// Smallest integer minimiser of the convex g(y) = f(y) + c*y.
inline int integer_argmin_affine(const PiecewiseLinear& f, double c) {
  if (f.bp.empty()) return 0;
  if (f.slope_left + c >= 0)
    throw validation_error("order-up-to objective unbounded below");
  double xc = f.bp.back();
  for (std::size_t i = 0; i < f.bp.size(); ++i)
    if (f.slope[i] + c >= 0) {
      xc = f.bp[i];
      break;
    }
  const int k = static_cast<int>(std::floor(xc));
  auto g = [&](int y) { return f.eval(y) + c * y; };
  int best = k - 1;
  for (int y : {k, k + 1})
    if (g(y) < g(best)) best = y;
  return best;
}

} // namespace detail

/// Piecewise-linear expected holding/backorder cost of serving periods
/// j..m-1 from the position taken at review j, for every cycle (j, m).
/// psi[j][m] sums the per-period curves of the convolved demands d_{j..r}.
struct CycleCostTables {
  int T = 0;
  int n_regions = 0;
  CostParams costs;
  std::vector<std::vector<PiecewiseLinear>> psi; ///< [j][m], m in (j, T+1]
  std::vector<double> mean_prefix;               ///< cumulative period means

  double cycle_mean(int j, int m) const { // expected demand over j..m-1
    return mean_prefix[static_cast<std::size_t>(m - 1)] -
           mean_prefix[static_cast<std::size_t>(j - 1)];
  }

  static CycleCostTables build(const Instance& inst, int n_regions) {
    if (n_regions < 1) throw validation_error("partition count must be >= 1");
    inst.validate();
    CycleCostTables tab;
    tab.T = inst.horizon();
    tab.n_regions = n_regions;
    tab.costs = inst.costs;
    tab.psi.assign(static_cast<std::size_t>(tab.T + 1), {});
    tab.mean_prefix.assign(static_cast<std::size_t>(tab.T + 1), 0.0);
    for (int t = 1; t <= tab.T; ++t)
      tab.mean_prefix[static_cast<std::size_t>(t)] =
          tab.mean_prefix[static_cast<std::size_t>(t - 1)] +
          inst.demand.period(t).mean();
    for (int j = 1; j <= tab.T; ++j) {
      auto& row = tab.psi[static_cast<std::size_t>(j)];
      row.resize(static_cast<std::size_t>(tab.T + 2));
      PiecewiseLinear acc;
      for (int r = j; r <= tab.T; ++r) {
        auto part = build_partition(inst.demand.range(j, r), n_regions);
        auto f = loss_lb_function(part, inst.costs.h, inst.costs.b);
        if (r == j)
          acc = std::move(f);
        else
          acc += f;
        row[static_cast<std::size_t>(r + 1)] = acc;
      }
    }
    return tab;
  }
};

/// Cheapest way to cover periods j..T given an order is placed at j, with
/// order-up-to levels free.  Unit costs telescope: every cycle before the
/// last buys its own expected demand, the last also pays for its level.
struct RelaxedPlan {
  std::vector<double> gamma; ///< gamma[j]: cost from a forced order at j
  std::vector<int> level;    ///< integer order-up-to level of the first cycle
  std::vector<int> next;     ///< period of the following order, T+1 if none

  static RelaxedPlan build(const CycleCostTables& tab) {
    const int T = tab.T;
    const double K = tab.costs.K, z = tab.costs.z;
    RelaxedPlan plan;
    plan.gamma.assign(static_cast<std::size_t>(T + 2), 0.0);
    plan.level.assign(static_cast<std::size_t>(T + 2), 0);
    plan.next.assign(static_cast<std::size_t>(T + 2), 0);
    for (int j = T; j >= 1; --j) {
      double best = std::numeric_limits<double>::infinity();
      int best_y = 0, best_m = T + 1;
      for (int m = j + 1; m <= T + 1; ++m) {
        const auto& f = tab.psi[static_cast<std::size_t>(j)]
                               [static_cast<std::size_t>(m)];
        double v;
        int y;
        if (m == T + 1) {
          y = detail::integer_argmin_affine(f, z);
          v = f.eval(y) + z * y;
        } else {
          y = detail::integer_argmin_affine(f, 0.0);
          v = f.eval(y) + z * tab.cycle_mean(j, m) +
              plan.gamma[static_cast<std::size_t>(m)];
        }
        if (v < best) {
          best = v;
          best_y = y;
          best_m = m;
        }
      }
      plan.gamma[static_cast<std::size_t>(j)] = K + best;
      plan.level[static_cast<std::size_t>(j)] = best_y;
      plan.next[static_cast<std::size_t>(j)] = best_m;
    }
    return plan;
  }
};

/// Order-up-to level S_t: first-cycle level of the cheapest relaxed plan
/// covering t..T with an order forced at t.
inline int order_up_to_level(const Instance& inst, int t, int n_regions) {
  if (t < 1 || t > inst.horizon())
    throw validation_error("period out of range");
  auto tab = CycleCostTables::build(inst, n_regions);
  return RelaxedPlan::build(tab).level[static_cast<std::size_t>(t)];
}

/// Search defaults: probe below the period's demand, pan by twice its mean.
inline SearchConfig default_search_config(const RangeDemand& d) {
  SearchConfig cfg;
  cfg.x0 = -static_cast<int>(std::ceil(d.quantile(0.999)));
  cfg.w = std::max<int>(8, static_cast<int>(std::llround(2.0 * d.mean())));
  return cfg;
}

namespace detail {

/// Approximate cost of covering t..T from position x with no order at t,
/// when every later order raises the position to the planned level of its
/// period.  After an order at m the state is exactly (m, S_m), so the
/// continuation values V_m = up_to_value(..., S_m) close the recursion.
inline double order_up_to_cost(const CycleCostTables& tab,
                               const std::vector<int>& levels,
                               const std::vector<double>& V, int t, double x) {
  const int T = tab.T;
  double best = tab.psi[static_cast<std::size_t>(t)]
                       [static_cast<std::size_t>(T + 1)].eval(x);
  for (int m = t + 1; m <= T; ++m) {
    const double q = levels[static_cast<std::size_t>(m)] -
                     (x - tab.cycle_mean(t, m));
    if (q < 0) continue; // position already above the level: no order fits
    const double v = tab.psi[static_cast<std::size_t>(t)]
                            [static_cast<std::size_t>(m)].eval(x) +
                     tab.costs.K + tab.costs.z * q +
                     V[static_cast<std::size_t>(m)];
    best = std::min(best, v);
  }
  return best;
}

/// Step-one quantities Q_t = S_t - s_t: s_t is the smallest inventory at
/// which staying is no worse than paying K plus the unit cost of ordering
/// up to S_t, both sides measured by the order-up-to cost approximation.
inline std::vector<int> step_quantities(const CycleCostTables& tab,
                                        const RelaxedPlan& plan,
                                        const Instance& inst) {
  const int T = tab.T;
  const double K = tab.costs.K, z = tab.costs.z;
  const int span = total_demand_bound(inst);
  std::vector<double> V(static_cast<std::size_t>(T + 1), 0.0);
  for (int m = T; m >= 1; --m)
    V[static_cast<std::size_t>(m)] = order_up_to_cost(
        tab, plan.level, V, m, plan.level[static_cast<std::size_t>(m)]);
  std::vector<int> qhat(static_cast<std::size_t>(T), 0);
  for (int t = 1; t <= T; ++t) {
    const int S = plan.level[static_cast<std::size_t>(t)];
    const double after = V[static_cast<std::size_t>(t)];
    auto stay_wins = [&](int x) {
      return order_up_to_cost(tab, plan.level, V, t, x) <=
             K + z * (S - x) + after;
    };
    auto cfg = default_search_config(inst.demand.period(t));
    const int lo = std::min(cfg.x0, S) - span - 2;
    auto res = find_threshold_crossing(stay_wins, cfg, lo, S);
    qhat[static_cast<std::size_t>(t - 1)] = std::max(S - res.value, 0);
  }
  return qhat;
}

/// Widens the raw up-to spans S_t - s_t by the mean demand of the trigger
/// period.  An order fires only after the position has fallen below s_t, on
/// average by one period's demand, so the span alone systematically
/// undershoots the quantity an order-up-to rule would place.
inline std::vector<int> undershoot_corrected(std::vector<int> qhat,
                                             const Instance& inst) {
  const int T = inst.horizon();
  for (int t = 1; t <= T; ++t) {
    int& q = qhat[static_cast<std::size_t>(t - 1)];
    if (q <= 0) continue;
    q += static_cast<int>(std::lround(inst.demand.period(t).mean()));
    if (inst.qmax > 0) q = std::min(q, inst.qmax);
  }
  return qhat;
}

} // namespace detail

/// Per-period order quantities of the two-step construction: the up-to span
/// of each planned order, widened by the expected undershoot below the
/// trigger point.
inline std::vector<int> plan_order_quantities(const Instance& inst,
                                              int n_regions) {
  auto tab = CycleCostTables::build(inst, n_regions);
  auto plan = RelaxedPlan::build(tab);
  return detail::undershoot_corrected(detail::step_quantities(tab, plan, inst),
                                      inst);
}

/// Approximate expected cost over t..T when no order is placed at t and
/// later orders add the fixed quantities qhat.  The expected position when
/// the next order arrives at m is the current position plus the quantity
/// minus the mean demand drained in between; the fractional drains are
/// applied inside the closed-form piecewise evaluations, so the table rows
/// stay on an integer grid with one row set per query period.
struct ApproxCostTable {
  InventoryGrid xgrid; ///< supported query positions
  std::vector<int> qhat;
  int n_regions = 0;
  CostParams costs;
  std::vector<std::vector<double>> J; ///< J[t]: no-order cost over xgrid

  int horizon() const { return static_cast<int>(qhat.size()); }

  /// Approximate no-order cost at (t, x).
  double value(int t, int x) const {
    if (x < xgrid.lo || x > xgrid.hi)
      throw validation_error("position outside approximation grid");
    return J[static_cast<std::size_t>(t)]
            [static_cast<std::size_t>(xgrid.index(x))];
  }

  /// Cost difference between not ordering at x and not ordering at x+Q_t.
  double delta(int t, int x) const {
    return value(t, x) - value(t, x + qhat[static_cast<std::size_t>(t - 1)]);
  }

  static ApproxCostTable build(const CycleCostTables& tab,
                               std::vector<int> qhat, int xlo, int xhi) {
    const int T = tab.T;
    if (static_cast<int>(qhat.size()) != T)
      throw validation_error("quantity vector must cover the horizon");
    if (xlo > xhi) throw validation_error("empty position range");
    ApproxCostTable a;
    a.qhat = std::move(qhat);
    a.n_regions = tab.n_regions;
    a.costs = tab.costs;
    a.xgrid = {xlo, xhi};
    int shift = 0;
    for (int q : a.qhat) {
      if (q < 0) throw validation_error("order quantities must be >= 0");
      shift += q;
    }
    const int n = xhi + shift - xlo + 1; // reachable accumulated positions
    a.J.assign(static_cast<std::size_t>(T + 1), {});
    std::vector<std::vector<double>> row(
        static_cast<std::size_t>(T + 1),
        std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int t = T; t >= 1; --t) {
      // row[j][i] covers j..T after a review at j holding position
      // xlo + i - drain(t, j), for queries made at period t
      for (int j = T; j >= t; --j) {
        auto& cur = row[static_cast<std::size_t>(j)];
        const double drain =
            tab.mean_prefix[static_cast<std::size_t>(j - 1)] -
            tab.mean_prefix[static_cast<std::size_t>(t - 1)];
        {
          detail::PiecewiseWalker wf{tab.psi[static_cast<std::size_t>(j)]
                                            [static_cast<std::size_t>(T + 1)]};
          for (int i = 0; i < n; ++i)
            cur[static_cast<std::size_t>(i)] = wf.at(xlo + i - drain);
        }
        for (int m = j + 1; m <= T; ++m) {
          const int q = a.qhat[static_cast<std::size_t>(m - 1)];
          if (q == 0) continue; // ordering nothing at cost K is never rational
          const double fixed = tab.costs.K + tab.costs.z * q;
          const auto& next = row[static_cast<std::size_t>(m)];
          detail::PiecewiseWalker wf{tab.psi[static_cast<std::size_t>(j)]
                                            [static_cast<std::size_t>(m)]};
          for (int i = 0; i + q < n; ++i) {
            const double v = wf.at(xlo + i - drain) + fixed +
                             next[static_cast<std::size_t>(i + q)];
            auto& cell = cur[static_cast<std::size_t>(i)];
            if (v < cell) cell = v;
          }
        }
      }
      a.J[static_cast<std::size_t>(t)] = std::vector<double>(
          row[static_cast<std::size_t>(t)].begin(),
          row[static_cast<std::size_t>(t)].begin() + (xhi - xlo + 1));
    }
    return a;
  }
};

/// One-shot wrapper around ApproxCostTable for a single (t, x) query.
inline double approx_no_order_cost(const Instance& inst, int t, int x,
                                   const std::vector<int>& qhat,
                                   int n_regions) {
  auto tab = CycleCostTables::build(inst, n_regions);
  auto a = ApproxCostTable::build(tab, qhat, x - 1, x + 1);
  return a.value(t, x);
}

/// Reorder point for period t: smallest x at which deferring the order is no
/// worse than paying the fixed plus unit cost of Q_t now.
inline SearchOutcome search_reorder_point(const ApproxCostTable& a, int t,
                                          const SearchConfig& cfg) {
  const int q = a.qhat[static_cast<std::size_t>(t - 1)];
  const double threshold = order_cost(a.costs, q);
  auto ok = [&](int x) { return a.delta(t, x) <= threshold; };
  return find_threshold_crossing(ok, cfg, a.xgrid.lo, a.xgrid.hi - q);
}

/// Approximate no-order cost curve over a range of opening positions.
struct ApproxCostCurve {
  int t = 1;
  int n_regions = 0;
  std::vector<int> qhat;
  std::vector<int> x;
  std::vector<double> value;
};

inline ApproxCostCurve approx_cost_curve(const Instance& inst, int t,
                                         const std::vector<int>& qhat,
                                         int n_regions, int xlo, int xhi) {
  if (xlo > xhi) throw validation_error("empty curve range");
  auto tab = CycleCostTables::build(inst, n_regions);
  auto a = ApproxCostTable::build(tab, qhat, xlo, xhi);
  ApproxCostCurve c;
  c.t = t;
  c.n_regions = n_regions;
  c.qhat = qhat;
  for (int x = xlo; x <= xhi; ++x) {
    c.x.push_back(x);
    c.value.push_back(a.value(t, x));
  }
  return c;
}

namespace detail {

inline PolicyParams heuristic_policy(const Instance& inst,
                                     std::vector<int> qhat,
                                     const CycleCostTables& tab,
                                     PolicyKind kind) {
  const int T = inst.horizon();
  const int span = total_demand_bound(inst);
  const int lo = std::min(inst.x0, -span) - 2;
  const int hi = std::max(inst.x0, span) + 2;
  auto a = ApproxCostTable::build(tab, std::move(qhat), lo, hi);
  PolicyParams pol;
  pol.kind = kind;
  pol.level = a.qhat;
  pol.s.assign(static_cast<std::size_t>(T), never_order);
  for (int t = 1; t <= T; ++t) {
    if (pol.level[static_cast<std::size_t>(t - 1)] == 0) continue;
    auto cfg = default_search_config(inst.demand.period(t));
    auto res = search_reorder_point(a, t, cfg);
    pol.s[static_cast<std::size_t>(t - 1)] = res.value;
  }
  return pol;
}

/// Approximate expected cost of running the quantity plan from the initial
/// position, allowing an immediate order of qhat[0]: the first-period row of
/// the no-order table doubles as the post-order continuation.
inline double static_plan_value(const Instance& inst,
                                const CycleCostTables& tab,
                                const std::vector<int>& qhat) {
  const int span = total_demand_bound(inst);
  int hi = inst.x0 + span + 2;
  for (int q : qhat) hi = std::max(hi, inst.x0 + q + 2);
  const int lo = inst.x0 - span - 2;
  auto a = ApproxCostTable::build(tab, qhat, lo, hi);
  double w = a.value(1, inst.x0);
  if (qhat[0] > 0)
    w = std::min(w, order_cost(inst.costs, qhat[0]) +
                        a.value(1, inst.x0 + qhat[0]));
  return w;
}

} // namespace detail

/// Two-step policy construction with per-period order quantities, finished
/// by a joint local refinement of quantities and reorder points.  The
/// refinement matters when demand swings sharply between periods: the mean
/// undershoot correction then misjudges individual quantities, and the
/// evaluated walk repairs them at small cost.
inline PolicyParams heuristic_sQt(const Instance& inst, int n_regions) {
  auto tab = CycleCostTables::build(inst, n_regions);
  auto plan = RelaxedPlan::build(tab);
  auto qhat = detail::undershoot_corrected(
      detail::step_quantities(tab, plan, inst), inst);
  auto pol =
      detail::heuristic_policy(inst, std::move(qhat), tab, PolicyKind::sQt);
  return refine_policy(inst, pol);
}

/// Two-step policy construction with one common order quantity.  Constant
/// plans are scanned through the approximate plan value (on a stride when
/// the range is wide, with the neighbourhood of the coarse minimum filled
/// in), the few best quantities are finished into full policies, and the
/// winner is picked by evaluated cost.  Near-ties go to the larger
/// quantity, which the approximation tends to undervalue.
inline PolicyParams heuristic_sQ(const Instance& inst, int n_regions) {
  const int T = inst.horizon();
  if (inst.qmax == 0) {
    PolicyParams none;
    none.kind = PolicyKind::sQ;
    none.s.assign(static_cast<std::size_t>(T), never_order);
    none.level.assign(static_cast<std::size_t>(T), 0);
    return none;
  }
  auto tab = CycleCostTables::build(inst, n_regions);
  int cap = total_demand_bound(inst);
  if (inst.qmax > 0) cap = std::min(cap, inst.qmax);
  cap = std::max(cap, 1);

  std::map<int, double> w;
  auto plan_value = [&](int Q) {
    auto it = w.find(Q);
    if (it != w.end()) return it->second;
    std::vector<int> qhat(static_cast<std::size_t>(T), Q);
    return w.emplace(Q, detail::static_plan_value(inst, tab, qhat))
        .first->second;
  };

  const int stride = std::max(1, cap / 48);
  int coarse = 1;
  for (int Q = 1; Q <= cap; Q += stride)
    if (plan_value(Q) < plan_value(coarse)) coarse = Q;
  if (plan_value(cap) < plan_value(coarse)) coarse = cap;
  for (int Q = std::max(1, coarse - stride + 1);
       Q <= std::min(cap, coarse + stride - 1); ++Q)
    plan_value(Q);

  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(w.size());
  for (const auto& [Q, v] : w) ranked.push_back({v, Q});
  std::sort(ranked.begin(), ranked.end());
  if (ranked.size() > 4) ranked.resize(4);

  struct Candidate {
    PolicyParams pol;
    double cost;
    int Q;
  };
  std::vector<Candidate> cands;
  for (const auto& [v, Q] : ranked) {
    std::vector<int> qhat(static_cast<std::size_t>(T), Q);
    auto pol = refine_reorder_points(
        inst,
        detail::heuristic_policy(inst, std::move(qhat), tab, PolicyKind::sQ));
    cands.push_back({pol, evaluate_policy(inst, pol), Q});
  }
  double best = inf;
  for (const auto& c : cands) best = std::min(best, c.cost);
  const Candidate* pick = nullptr;
  for (const auto& c : cands)
    if (c.cost <= best * (1 + 1e-3) && (!pick || c.Q > pick->Q)) pick = &c;
  return pick->pol;
}

} // namespace lotsize
