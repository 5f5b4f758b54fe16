#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "lotsize/core.hpp"
#include "lotsize/demand.hpp"
#include "lotsize/instance.hpp"

namespace lotsize {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Uniform draw in (0,1) keyed on (seed, run, period): a counter-based
/// stream, so every (run, period) cell is addressable without sequential
/// state.  Two policies simulated under one seed therefore see identical
/// demand paths (common random numbers), and results do not depend on how
/// runs are scheduled across threads.
inline double u01(std::uint64_t seed, std::uint64_t run, std::uint64_t t) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(run + 0x51ED270B93C6C0D5ull));
  h = splitmix64(h + t);
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

/// Running compensated sum (Neumaier): the reduction is associative enough
/// to make block-wise accumulation reproducible to the last bit.
struct CompensatedSum {
  double sum = 0, c = 0;

  void add(double v) {
    const double t = sum + v;
    c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }

  double value() const { return sum + c; }
};

/// Per-period inverse-transform samplers, precomputed once per simulation.
class DemandSampler {
public:
  explicit DemandSampler(const DemandModel& model) {
    const int T = model.horizon();
    continuous_ = model.kind() == DemandKind::normal;
    for (int t = 1; t <= T; ++t) {
      RangeDemand d = model.period(t);
      if (continuous_) {
        mu_.push_back(d.mu());
        sigma_.push_back(d.sigma());
      } else {
        const Pmf& a = d.atoms();
        std::vector<double> cum(a.p.size());
        double c = 0;
        for (std::size_t k = 0; k < a.p.size(); ++k) {
          c += a.p[k];
          cum[k] = c;
        }
        cum_.push_back(std::move(cum));
      }
    }
  }

  bool continuous() const { return continuous_; }

  double sample(int t, double u) const {
    if (continuous_) {
      const double mu = mu_[static_cast<std::size_t>(t - 1)];
      const double sg = sigma_[static_cast<std::size_t>(t - 1)];
      if (sg == 0) return mu;
      return boost::math::quantile(
          boost::math::normal_distribution<>(mu, sg), u);
    }
    const auto& cum = cum_[static_cast<std::size_t>(t - 1)];
    auto it = std::lower_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    return static_cast<double>(it - cum.begin());
  }

private:
  bool continuous_ = false;
  std::vector<std::vector<double>> cum_;
  std::vector<double> mu_, sigma_;
};

} // namespace detail

/// Worker count for parallel sections: LOTSIZE_THREADS when set and
/// positive, otherwise the hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("LOTSIZE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

struct SimulationReport {
  long long runs = 0;
  double mean = 0;
  double stderr_mean = 0;   ///< standard error of the mean
  double ci_half_width = 0; ///< 2.576 * stderr (99% confidence)
  std::uint64_t seed = 0;
  std::vector<double> costs; ///< per-run totals, kept only on request
};

struct SimulateOptions {
  bool hold_first_period = false; ///< suppress the period-1 order
  bool keep_costs = false;        ///< retain the per-run cost stream
};

/// Monte Carlo evaluation of a policy: for each run, demands are sampled by
/// inversion from the counter-based stream, the policy rule is applied each
/// period, and ordering plus end-of-period holding/backorder costs accrue.
/// Order-up-to levels are clipped to x + qmax when the instance caps order
/// sizes, mirroring the exact evaluation.
/// Identical (instance, policy, runs, seed) give a bit-identical report for
/// any worker count: runs are split into fixed blocks whose compensated
/// partial sums are reduced in block order.
inline SimulationReport simulate_policy(const Instance& inst,
                                        const PolicyParams& policy,
                                        long long runs, std::uint64_t seed,
                                        SimulateOptions opt = {}) {
  inst.validate();
  policy.validate();
  if (runs < 1) throw validation_error("simulation needs at least one run");
  if (policy.horizon() != inst.horizon())
    throw validation_error("policy horizon differs from instance horizon");

  const int T = inst.horizon();
  detail::DemandSampler sampler(inst.demand);

  auto run_cost = [&](long long run) {
    double x = inst.x0;
    double total = 0;
    for (int t = 1; t <= T; ++t) {
      const int s = policy.s[static_cast<std::size_t>(t - 1)];
      const int lvl = policy.level[static_cast<std::size_t>(t - 1)];
      double y = x;
      if (!(opt.hold_first_period && t == 1) && x < s) {
        y = policy.kind == PolicyKind::sS ? lvl : x + lvl;
        if (policy.kind == PolicyKind::sS && inst.qmax >= 0)
          y = std::min(y, x + inst.qmax);
        total += order_cost(inst.costs, y - x);
      }
      const double d = sampler.sample(
          t, detail::u01(seed, static_cast<std::uint64_t>(run),
                         static_cast<std::uint64_t>(t)));
      total += inst.costs.h * std::max(y - d, 0.0) +
               inst.costs.b * std::max(d - y, 0.0);
      x = y - d;
    }
    return total;
  };

  constexpr long long block_size = 4096;
  const long long blocks = (runs + block_size - 1) / block_size;
  std::vector<detail::CompensatedSum> sums(static_cast<std::size_t>(blocks));
  std::vector<detail::CompensatedSum> sqsums(static_cast<std::size_t>(blocks));
  SimulationReport rep;
  rep.runs = runs;
  rep.seed = seed;
  if (opt.keep_costs) rep.costs.assign(static_cast<std::size_t>(runs), 0.0);

  const int workers =
      static_cast<int>(std::min<long long>(worker_count(), blocks));
  auto work = [&](int w) {
    for (long long blk = w; blk < blocks; blk += workers) {
      const long long lo = blk * block_size;
      const long long hi = std::min(runs, lo + block_size);
      for (long long r = lo; r < hi; ++r) {
        const double c = run_cost(r);
        sums[static_cast<std::size_t>(blk)].add(c);
        sqsums[static_cast<std::size_t>(blk)].add(c * c);
        if (opt.keep_costs) rep.costs[static_cast<std::size_t>(r)] = c;
      }
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  detail::CompensatedSum total, total_sq;
  for (long long blk = 0; blk < blocks; ++blk) {
    total.add(sums[static_cast<std::size_t>(blk)].value());
    total_sq.add(sqsums[static_cast<std::size_t>(blk)].value());
  }
  const double n = static_cast<double>(runs);
  rep.mean = total.value() / n;
  if (runs > 1) {
    const double var =
        std::max(0.0, (total_sq.value() - n * rep.mean * rep.mean) / (n - 1));
    rep.stderr_mean = std::sqrt(var / n);
  }
  rep.ci_half_width = 2.576 * rep.stderr_mean;
  return rep;
}

/// Percent cost increase of a value over a benchmark.
inline double optimality_gap(double etc_benchmark, double etc_other) {
  if (!(etc_benchmark > 0))
    throw validation_error("benchmark cost must be positive");
  return 100.0 * (etc_other - etc_benchmark) / etc_benchmark;
}

} // namespace lotsize
