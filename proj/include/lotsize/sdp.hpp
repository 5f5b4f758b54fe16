#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "lotsize/core.hpp"
#include "lotsize/demand.hpp"
#include "lotsize/instance.hpp"

namespace lotsize {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Expected holding plus backorder cost table L(y) for y in [ylo, yhi].
/// Discrete families use the running-cdf recurrence
/// Lhat(y+1) = Lhat(y) + F(y); normal uses the closed form per point.
inline std::vector<double> immediate_cost_table(const RangeDemand& d,
                                                const CostParams& c, int ylo,
                                                int yhi) {
  std::vector<double> out(static_cast<std::size_t>(yhi - ylo + 1));
  if (d.kind() == DemandKind::normal && d.sigma() > 0) {
    for (int y = ylo; y <= yhi; ++y)
      out[static_cast<std::size_t>(y - ylo)] =
          c.h * d.complementary_loss(y) + c.b * d.loss(y);
    return out;
  }
  const Pmf& a = d.atoms();
  const double mean = d.mean();
  double closs = d.complementary_loss(ylo);
  double cdf = 0;
  for (int k = 0; k <= std::min(a.max_value(), ylo); ++k) cdf += a.p[k];
  for (int y = ylo;; ++y) {
    double loss = closs - y + mean;
    out[static_cast<std::size_t>(y - ylo)] = c.h * closs + c.b * std::max(loss, 0.0);
    if (y == yhi) break;
    closs += cdf;
    if (y + 1 >= 0 && y + 1 <= a.max_value()) cdf += a.p[y + 1];
  }
  return out;
}

namespace detail {

/// One stage of the value recursion: out[y-ylo] = L(y) + E[next(y - d)] for
/// y in [ylo, yhi]. The continuation is read from next over [nlo, ...] with
/// lookups below nlo clamped to next.front(); the mass that falls below the
/// clamp is at most the truncated tail and contributes through tail sums.
inline void stage_expectation(const std::vector<double>& L, int ylo, int yhi,
                              const Pmf& atoms, const std::vector<double>& next,
                              int nlo, std::vector<double>& out) {
  const int dmax = atoms.max_value();
  std::vector<double> tail(static_cast<std::size_t>(dmax) + 2, 0.0);
  for (int k = dmax; k >= 0; --k) tail[k] = tail[k + 1] + atoms.p[k];
  out.assign(static_cast<std::size_t>(yhi - ylo + 1), 0.0);
  for (int y = ylo; y <= yhi; ++y) {
    const int reach = y - nlo; // largest d with y - d still on the next row
    const int top = std::min(dmax, reach);
    double acc = 0;
    const double* row = next.data() + (y - nlo);
    for (int d = 0; d <= top; ++d) acc += atoms.p[d] * row[-d];
    if (reach < dmax) acc += tail[std::max(reach + 1, 0)] * next.front();
    out[static_cast<std::size_t>(y - ylo)] = L[static_cast<std::size_t>(y - ylo)] + acc;
  }
}

} // namespace detail

/// Stage values of a fixed-quantity plan on the full instance grid.
/// J[t](x) is the cost of not ordering in period t, Jhat[t](x) the cost of
/// ordering q[t], and V[t] their pointwise minimum; rows are 0-based in t.
struct ValueTable {
  InventoryGrid grid;
  std::vector<int> q;
  std::vector<std::vector<double>> J, Jhat, V; ///< V has a terminal zero row

  int horizon() const { return static_cast<int>(q.size()); }

  double value(int t, int x) const { return at(V[static_cast<std::size_t>(t - 1)], x); }
  double no_order(int t, int x) const { return at(J[static_cast<std::size_t>(t - 1)], x); }
  double order(int t, int x) const { return at(Jhat[static_cast<std::size_t>(t - 1)], x); }

  /// J_t(x) - J_t(x + q_t), defined while both points sit on the grid.
  double delta_j(int t, int x) const {
    return no_order(t, x) - no_order(t, x + q[static_cast<std::size_t>(t - 1)]);
  }

  double at(const std::vector<double>& row, int x) const {
    if (x < grid.lo) return row.front();
    if (x > grid.hi) throw validation_error("position above value-table grid");
    return row[static_cast<std::size_t>(grid.index(x))];
  }
};

/// Backward evaluation of the fixed plan q: V_t(x) = min(J_t, Jhat_t)(x)
/// with J_t(x) = L_t(x) + E[V_{t+1}(x - d)] and Jhat_t(x) = c(q_t) +
/// L_t(x + q_t) + E[V_{t+1}(x + q_t - d)]. Positions where x + q_t leaves
/// the grid keep Jhat = +inf; they are unreachable from x0 by construction.
/// The recursion runs on a grid padded below by the later periods' demand
/// reach so that every exposed row is exact up to the truncated tail; the
/// clamped region of each stage stays strictly under the exposed window.
inline ValueTable evaluate_fixed_q(const Instance& inst, const std::vector<int>& q) {
  const int T = inst.horizon();
  if (static_cast<int>(q.size()) != T)
    throw validation_error("quantity plan length differs from horizon");
  for (int v : q)
    if (v < 0) throw validation_error("order quantities must be >= 0");

  ValueTable tab;
  tab.grid = grid_for_quantities(inst, q);
  tab.q = q;
  const int n = tab.grid.size();
  tab.J.assign(T, {});
  tab.Jhat.assign(T, {});
  tab.V.assign(T + 1, {});
  tab.V[T].assign(n, 0.0);

  std::vector<Pmf> atoms;
  atoms.reserve(static_cast<std::size_t>(T));
  int pad = 0;
  for (int t = 1; t <= T; ++t) {
    atoms.push_back(inst.demand.period(t).atoms());
    if (t < T) pad += atoms.back().max_value();
  }
  const InventoryGrid big{tab.grid.lo - pad, tab.grid.hi};
  const int N = big.size();
  const int skip = tab.grid.lo - big.lo;

  std::vector<double> next(static_cast<std::size_t>(N), 0.0), w, vbig;
  for (int t = T; t >= 1; --t) {
    RangeDemand d = inst.demand.period(t);
    std::vector<double> L =
        immediate_cost_table(d, inst.costs, big.lo, big.hi);
    detail::stage_expectation(L, big.lo, big.hi,
                              atoms[static_cast<std::size_t>(t - 1)], next,
                              big.lo, w);
    const int qt = q[static_cast<std::size_t>(t - 1)];
    const double oc = order_cost(inst.costs, qt);
    auto& J = tab.J[t - 1];
    auto& Jh = tab.Jhat[t - 1];
    auto& V = tab.V[t - 1];
    J.assign(w.begin() + skip, w.end());
    Jh.assign(static_cast<std::size_t>(n), inf);
    V.assign(static_cast<std::size_t>(n), 0.0);
    vbig.assign(static_cast<std::size_t>(N), 0.0);
    for (int i = 0; i < N; ++i) {
      double jh = inf;
      if (i + qt < N) jh = oc + w[static_cast<std::size_t>(i + qt)];
      vbig[static_cast<std::size_t>(i)] = std::min(w[static_cast<std::size_t>(i)], jh);
      if (i >= skip) {
        Jh[static_cast<std::size_t>(i - skip)] = jh;
        V[static_cast<std::size_t>(i - skip)] = vbig[static_cast<std::size_t>(i)];
      }
    }
    next = vbig;
  }
  return tab;
}

/// Reorder points of a fixed-quantity plan: s_t is the smallest grid
/// position at which not ordering is weakly optimal, so the rule
/// "order exactly when x < s_t" reproduces the table's optimal action,
/// with ties resolved to not ordering.
inline std::vector<int> extract_reorder_points(const Instance& inst,
                                               const ValueTable& tab) {
  const int T = tab.horizon();
  std::vector<int> s(static_cast<std::size_t>(T), never_order);
  for (int t = 1; t <= T; ++t) {
    const int qt = tab.q[static_cast<std::size_t>(t - 1)];
    if (qt == 0) continue;
    const double c = order_cost(inst.costs, qt);
    int x = tab.grid.lo;
    for (; x + qt <= tab.grid.hi; ++x)
      if (tab.delta_j(t, x) <= c) break;
    s[static_cast<std::size_t>(t - 1)] = x;
  }
  return s;
}

/// Optimal order-up-to solve. C[t](x) is the optimal cost-to-go before
/// ordering, G[t](y) the cost after fixing the post-order position y:
/// C_t(x) = min(G_t(x), K + min_{y > x} (z (y - x) + G_t(y))).
struct SsSolution {
  InventoryGrid grid;
  PolicyParams policy;
  std::vector<std::vector<double>> C, G;
  double expected_cost = 0;  ///< C_1(x0)
  double g1_at_x0 = 0;       ///< G_1(x0), the no-order-in-period-1 benchmark

  double g(int t, int y) const {
    const auto& row = G[static_cast<std::size_t>(t - 1)];
    if (y < grid.lo) return row.front();
    return row[static_cast<std::size_t>(grid.index(y))];
  }
};

/// Optimal order-up-to policy by backward induction.  When order_cap >= 0 the
/// per-period order quantity is limited to order_cap units, which makes the
/// resulting cost comparable with fixed-quantity policies sharing that bound.
/// The exported (s, S) pairs replicate the uncapped rule exactly; under a cap
/// they are a threshold projection of the recursion's actions, which replay
/// may not reproduce when the optimal order region is not an interval.
inline SsSolution solve_sS(const Instance& inst, int order_cap = -1) {
  inst.validate();
  const int T = inst.horizon();
  SsSolution sol;
  sol.grid = grid_for_order_up_to(inst);
  const int n = sol.grid.size();
  sol.C.assign(T + 1, {});
  sol.G.assign(T, {});
  sol.C[T].assign(n, 0.0);
  sol.policy.kind = PolicyKind::sS;
  sol.policy.s.assign(T, 0);
  sol.policy.level.assign(T, 0);

  const double K = inst.costs.K, z = inst.costs.z;
  std::vector<double> g;
  for (int t = T; t >= 1; --t) {
    RangeDemand d = inst.demand.period(t);
    std::vector<double> L =
        immediate_cost_table(d, inst.costs, sol.grid.lo, sol.grid.hi);
    detail::stage_expectation(L, sol.grid.lo, sol.grid.hi, d.atoms(),
                              sol.C[t], sol.grid.lo, g);
    // Suffix minima of z*y + G(y) locate the best order-up-to target.
    std::vector<double> m(n + 1, inf);
    std::vector<int> marg(n + 1, sol.grid.hi + 1);
    for (int i = n - 1; i >= 0; --i) {
      double zy = z * (sol.grid.lo + i) + g[static_cast<std::size_t>(i)];
      m[i] = m[i + 1];
      marg[i] = marg[i + 1];
      if (zy <= m[i]) { // ties keep the smaller level
        m[i] = zy;
        marg[i] = sol.grid.lo + i;
      }
    }
    auto& C = sol.C[t - 1];
    C.assign(n, 0.0);
    int s_t = sol.grid.hi + 1;
    std::deque<int> win;  // capped case: targets j in (i, i+cap], keys rising
    for (int i = n - 1; i >= 0; --i) {
      const int x = sol.grid.lo + i;
      const double stay = g[static_cast<std::size_t>(i)];
      double order = inf;
      if (order_cap < 0) {
        order = K - z * x + m[i + 1];
      } else {
        const auto key = [&](int j) {
          return z * (sol.grid.lo + j) + g[static_cast<std::size_t>(j)];
        };
        if (i + 1 <= n - 1) {
          while (!win.empty() && key(win.back()) >= key(i + 1)) win.pop_back();
          win.push_back(i + 1);
        }
        while (!win.empty() && win.front() > i + order_cap) win.pop_front();
        if (!win.empty()) order = K - z * x + key(win.front());
      }
      C[static_cast<std::size_t>(i)] = std::min(stay, order);
    }
    for (int i = 0; i < n; ++i) {
      const int x = sol.grid.lo + i;
      if (g[static_cast<std::size_t>(i)] <= C[static_cast<std::size_t>(i)]) {
        s_t = x;
        break;
      }
    }
    sol.G[t - 1] = std::move(g);
    sol.policy.s[static_cast<std::size_t>(t - 1)] = s_t;
    sol.policy.level[static_cast<std::size_t>(t - 1)] = marg[0];
  }
  sol.expected_cost = sol.C[0][static_cast<std::size_t>(sol.grid.index(inst.x0))];
  sol.g1_at_x0 = sol.G[0][static_cast<std::size_t>(sol.grid.index(inst.x0))];
  return sol;
}

/// Exact expected cost of following the given parameters from x0, by
/// backward induction with the action forced to the policy's prescription.
/// Order-up-to levels are clipped to x + qmax when the instance caps order
/// sizes, matching the capped solve that produced them.  With
/// hold_first_period the period-1 order is suppressed, matching benchmarks
/// quoted conditional on no replenishment in the first period.
inline double evaluate_policy(const Instance& inst, const PolicyParams& policy,
                              bool hold_first_period = false) {
  policy.validate();
  const int T = inst.horizon();
  if (policy.horizon() != T)
    throw validation_error("policy horizon differs from instance horizon");

  InventoryGrid grid;
  if (policy.kind == PolicyKind::sS) {
    grid = grid_for_order_up_to(inst);
    for (int S : policy.level) grid.hi = std::max(grid.hi, S + 1);
    for (int s : policy.s)
      if (s != never_order) grid.lo = std::min(grid.lo, s - 1);
  } else {
    std::vector<int> q(policy.level.begin(), policy.level.end());
    grid = grid_for_quantities(inst, q);
    // an order fires only from x < s_t, so no reachable position exceeds
    // max(x0, s_t - 1 + q_t); the generic quantity grid is far wider
    int top = inst.x0;
    for (int t = 1; t <= T; ++t) {
      const int s = policy.s[static_cast<std::size_t>(t - 1)];
      if (s == never_order) continue;
      top = std::max(top,
                     s - 1 + policy.level[static_cast<std::size_t>(t - 1)]);
    }
    grid.hi = std::min(grid.hi, top + 2);
  }
  const int n = grid.size();
  std::vector<double> next(n, 0.0), w, cur(n, 0.0);
  for (int t = T; t >= 1; --t) {
    RangeDemand d = inst.demand.period(t);
    std::vector<double> L = immediate_cost_table(d, inst.costs, grid.lo, grid.hi);
    detail::stage_expectation(L, grid.lo, grid.hi, d.atoms(), next, grid.lo, w);
    const int s = policy.s[static_cast<std::size_t>(t - 1)];
    const int lvl = policy.level[static_cast<std::size_t>(t - 1)];
    const bool hold = hold_first_period && t == 1;
    for (int i = 0; i < n; ++i) {
      const int x = grid.lo + i;
      if (!hold && x < s) {
        int y = policy.kind == PolicyKind::sS ? lvl : x + lvl;
        if (policy.kind == PolicyKind::sS && inst.qmax >= 0)
          y = std::min(y, x + inst.qmax);
        const int yi = grid.index(std::min(y, grid.hi));
        cur[static_cast<std::size_t>(i)] =
            order_cost(inst.costs, y - x) + w[static_cast<std::size_t>(yi)];
      } else {
        cur[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)];
      }
    }
    next = cur;
  }
  return next[static_cast<std::size_t>(grid.index(inst.x0))];
}

namespace detail {

/// Greedy unit walk on one policy field: keeps stepping while the evaluated
/// cost strictly improves, restores the last step otherwise.
inline bool improve_field(const Instance& inst, PolicyParams& policy,
                          int& field, int step, int lo, int hi, double& best) {
  bool moved = false;
  for (;;) {
    if (field + step < lo || field + step > hi) return moved;
    field += step;
    const double v = evaluate_policy(inst, policy);
    if (v < best - 1e-12) {
      best = v;
      moved = true;
    } else {
      field -= step;
      return moved;
    }
  }
}

} // namespace detail

/// Coordinate descent on the reorder points of a fixed policy: moves each
/// finite s by one unit while that improves the evaluated expected cost.
/// Levels and quantities stay untouched, so the result is comparable with
/// the input under the same policy family.
inline PolicyParams refine_reorder_points(const Instance& inst,
                                          PolicyParams policy,
                                          int max_rounds = 4) {
  const int T = inst.horizon();
  const int shi = std::numeric_limits<int>::max() / 2;
  double best = evaluate_policy(inst, policy);
  for (int round = 0; round < max_rounds; ++round) {
    bool moved = false;
    for (int t = 1; t <= T; ++t) {
      int& s = policy.s[static_cast<std::size_t>(t - 1)];
      if (s == never_order) continue;
      for (int step : {+1, -1})
        moved |= detail::improve_field(inst, policy, s, step, never_order + 1,
                                       shi, best);
    }
    if (!moved) break;
  }
  return policy;
}

/// Coordinate descent on quantities and reorder points together.  Each round
/// walks the per-period quantities (policies with one common quantity keep
/// it fixed, only their reorder points move) and then the reorder points,
/// accepting unit steps that strictly improve the evaluated expected cost.
inline PolicyParams refine_policy(const Instance& inst, PolicyParams policy,
                                  int max_rounds = 4) {
  const int T = inst.horizon();
  const int qhi = inst.qmax > 0 ? inst.qmax : std::numeric_limits<int>::max() / 2;
  const int shi = std::numeric_limits<int>::max() / 2;
  double best = evaluate_policy(inst, policy);
  for (int round = 0; round < max_rounds; ++round) {
    bool moved = false;
    if (policy.kind == PolicyKind::sQt)
      for (int t = 1; t <= T; ++t) {
        const std::size_t i = static_cast<std::size_t>(t - 1);
        if (policy.s[i] == never_order) continue;
        for (int step : {+1, -1})
          moved |= detail::improve_field(inst, policy, policy.level[i], step, 0,
                                         qhi, best);
      }
    for (int t = 1; t <= T; ++t) {
      const std::size_t i = static_cast<std::size_t>(t - 1);
      if (policy.s[i] == never_order) continue;
      for (int step : {+1, -1})
        moved |= detail::improve_field(inst, policy, policy.s[i], step,
                                       never_order + 1, shi, best);
    }
    if (!moved) break;
  }
  return policy;
}

struct EnumOptions {
  double max_work = 2e10; ///< budget on expectation multiply-adds
};

/// Result of an exact enumeration solve over quantity plans.
struct EnumSolution {
  std::vector<int> q;
  PolicyParams policy;
  double expected_cost = 0;
  ValueTable tables; ///< full-grid re-evaluation of the winning plan
  double work = 0;   ///< expectation multiply-adds spent
};

namespace detail {

/// Shared state of the suffix enumeration. Level t keeps values only on the
/// band reachable from x0: at most (t-1) orders above, cumulative truncated
/// demand below. Identical quantity suffixes share their value rows.
struct SuffixEnum {
  const Instance& inst;
  int qmax;
  int T;
  std::vector<Pmf> atoms;           // per period
  std::vector<std::vector<double>> tails; // tails[t-1][k] = P(d_t >= k)
  std::vector<int> lo, hi;          // value-band bounds per level, 1-based
  std::vector<std::vector<double>> L;   // immediate costs per level band
  std::vector<std::vector<double>> row; // V rows per level
  std::vector<double> w;                // scratch
  std::vector<int> q;
  std::vector<int> best_q;
  double best = inf;
  double work = 0;
  double budget;

  SuffixEnum(const Instance& ins, int qm, double max_work)
      : inst(ins), qmax(qm), T(ins.horizon()), budget(max_work) {
    atoms.reserve(T);
    lo.assign(T + 2, 0);
    hi.assign(T + 2, 0);
    lo[1] = hi[1] = inst.x0;
    for (int t = 1; t <= T; ++t) {
      atoms.push_back(inst.demand.period(t).atoms());
      const int dmax = atoms.back().max_value();
      std::vector<double> tail(static_cast<std::size_t>(dmax) + 2, 0.0);
      for (int k = dmax; k >= 0; --k) tail[k] = tail[k + 1] + atoms.back().p[k];
      tails.push_back(std::move(tail));
      lo[t + 1] = lo[t] - dmax;
      hi[t + 1] = hi[t] + qmax;
    }
    L.resize(T + 1);
    row.resize(T + 2);
    for (int t = 2; t <= T; ++t)
      L[t] = immediate_cost_table(inst.demand.period(t), inst.costs, lo[t],
                                  hi[t] + qmax);
    row[T + 1].assign(static_cast<std::size_t>(hi[T + 1] - lo[T + 1] + 1), 0.0);
    q.assign(T, 0);
  }

  double estimate() const {
    double total = 0, suffixes = 1;
    for (int t = T; t >= 2; --t) {
      suffixes *= qmax + 1;
      total += suffixes * static_cast<double>(hi[t] - lo[t] + 1 + qmax) *
               (atoms[static_cast<std::size_t>(t - 1)].max_value() + 1);
    }
    total += suffixes * (qmax + 1) * 2.0 *
             (atoms[0].max_value() + 1);
    return total;
  }

  void run() {
    if (estimate() > budget)
      throw budget_error("enumeration over " + std::to_string(qmax + 1) + "^" +
                         std::to_string(T) +
                         " quantity plans exceeds the work budget");
    descend(T);
  }

  // Period-t cost at position x given the next row, with the order option.
  double stage_value(int t, int x, int qt, const std::vector<double>& L_t,
                     int Llo, const std::vector<double>& nxt) {
    const Pmf& a = atoms[static_cast<std::size_t>(t - 1)];
    const auto& tail = tails[static_cast<std::size_t>(t - 1)];
    auto w_at = [&](int y) {
      double acc = 0;
      const int reach = y - lo[t + 1];
      const int top = std::min(a.max_value(), reach);
      for (int d = 0; d <= top; ++d)
        acc += a.p[d] * nxt[static_cast<std::size_t>(reach - d)];
      if (reach < a.max_value())
        acc += tail[static_cast<std::size_t>(std::max(reach + 1, 0))] * nxt.front();
      return L_t[static_cast<std::size_t>(y - Llo)] + acc;
    };
    const double stay = w_at(x);
    return qt > 0 ? std::min(stay, order_cost(inst.costs, qt) + w_at(x + qt))
                  : stay;
  }

  void descend(int t) {
    if (t == 1) {
      std::vector<double> L1 = immediate_cost_table(
          inst.demand.period(1), inst.costs, inst.x0, inst.x0 + qmax);
      for (int q1 = 0; q1 <= qmax; ++q1) {
        q[0] = q1;
        work += 2.0 * (atoms[0].max_value() + 1);
        const double v = stage_value(1, inst.x0, q1, L1, inst.x0, row[2]);
        if (v < best - 1e-12 ||
            (std::abs(v - best) <= 1e-12 &&
             std::lexicographical_compare(q.begin(), q.end(), best_q.begin(),
                                          best_q.end()))) {
          best = v;
          best_q = q;
        }
      }
      return;
    }
    for (int qt = 0; qt <= qmax; ++qt) {
      q[static_cast<std::size_t>(t - 1)] = qt;
      stage_rows(t, qt, row[t]);
      descend(t - 1);
    }
  }

  void stage_rows(int t, int qt, std::vector<double>& r) {
    const Pmf& a = atoms[static_cast<std::size_t>(t - 1)];
    const auto& tail = tails[static_cast<std::size_t>(t - 1)];
    const int dmax = a.max_value();
    const int wlo = lo[t], whi = hi[t] + qt;
    w.assign(static_cast<std::size_t>(whi - wlo + 1), 0.0);
    const auto& nxt = row[t + 1];
    for (int y = wlo; y <= whi; ++y) {
      const int reach = y - lo[t + 1];
      const int top = std::min(dmax, reach);
      double acc = 0;
      const double* base = nxt.data() + reach;
      for (int d = 0; d <= top; ++d) acc += a.p[d] * base[-d];
      if (reach < dmax)
        acc += tail[static_cast<std::size_t>(std::max(reach + 1, 0))] * nxt.front();
      w[static_cast<std::size_t>(y - wlo)] =
          L[t][static_cast<std::size_t>(y - wlo)] + acc;
    }
    work += static_cast<double>(whi - wlo + 1) * (dmax + 1);
    if (work > budget)
      throw budget_error("enumeration exceeded its work budget");
    const double oc = order_cost(inst.costs, qt);
    r.assign(static_cast<std::size_t>(hi[t] - lo[t] + 1), 0.0);
    for (int i = 0; i < static_cast<int>(r.size()); ++i) {
      const double stay = w[static_cast<std::size_t>(i)];
      r[static_cast<std::size_t>(i)] =
          qt > 0 ? std::min(stay, oc + w[static_cast<std::size_t>(i + qt)])
                 : stay;
    }
  }
};

} // namespace detail

/// Exact solve of the fixed-quantity problem by enumeration of all
/// (qmax+1)^T quantity plans, sharing value rows across common suffixes.
/// Ties in expected cost resolve to the lexicographically smallest plan.
inline EnumSolution solve_sQt_enum(const Instance& inst, int qmax,
                                   const EnumOptions& opt = {}) {
  inst.validate();
  if (qmax < 0) throw validation_error("qmax must be >= 0");
  detail::SuffixEnum e(inst, qmax, opt.max_work);
  e.run();
  EnumSolution sol;
  sol.q = e.best_q;
  sol.work = e.work;
  sol.tables = evaluate_fixed_q(inst, sol.q);
  sol.expected_cost = sol.tables.value(1, inst.x0);
  sol.policy.kind = PolicyKind::sQt;
  sol.policy.level = sol.q;
  sol.policy.s = extract_reorder_points(inst, sol.tables);
  return sol;
}

/// Exact solve of the common-quantity problem by scanning Q = 0..qmax.
/// Ties resolve to the smallest Q.
inline EnumSolution solve_sQ_enum(const Instance& inst, int qmax,
                                  const EnumOptions& opt = {}) {
  inst.validate();
  if (qmax < 0) throw validation_error("qmax must be >= 0");
  const int T = inst.horizon();
  double best = inf, work = 0;
  int best_Q = 0;
  for (int Q = 0; Q <= qmax; ++Q) {
    detail::SuffixEnum e(inst, Q, opt.max_work - work);
    // Pin every period to Q by collapsing the per-level loop to one choice.
    for (int t = T; t >= 2; --t) e.stage_rows(t, Q, e.row[t]);
    std::vector<double> L1 = immediate_cost_table(inst.demand.period(1),
                                                  inst.costs, inst.x0,
                                                  inst.x0 + Q);
    const double v = e.stage_value(1, inst.x0, Q, L1, inst.x0, e.row[2]);
    work += e.work;
    if (v < best - 1e-12) {
      best = v;
      best_Q = Q;
    }
  }
  EnumSolution sol;
  sol.q.assign(static_cast<std::size_t>(T), best_Q);
  sol.work = work;
  sol.tables = evaluate_fixed_q(inst, sol.q);
  sol.expected_cost = sol.tables.value(1, inst.x0);
  sol.policy.kind = PolicyKind::sQ;
  sol.policy.level = sol.q;
  sol.policy.s = extract_reorder_points(inst, sol.tables);
  return sol;
}

} // namespace lotsize
