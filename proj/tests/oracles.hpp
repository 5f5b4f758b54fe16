#pragma once

// Slow, transparently-direct reference implementations used to cross-check
// the library.  Everything here favours obviousness over speed and shares no
// code with the headers under test.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lotsize/instance.hpp"
#include "lotsize/partition.hpp"

namespace oracle {

// Poisson pmf by the multiplicative recursion in long double.
inline std::vector<double> poisson_pmf(double lambda, double keep = 1.0 - 1e-12) {
  std::vector<double> p;
  long double term = std::exp(static_cast<long double>(-lambda));
  long double cum = 0.0L;
  for (int k = 0; k < 4000; ++k) {
    p.push_back(static_cast<double>(term));
    cum += term;
    if (cum >= keep && k >= lambda) break;
    term *= lambda / (k + 1);
  }
  return p;
}

inline double loss_sum(double x, const std::vector<double>& pmf) {
  long double acc = 0.0L;
  for (std::size_t k = 0; k < pmf.size(); ++k)
    if (k > x) acc += (k - x) * static_cast<long double>(pmf[k]);
  return static_cast<double>(acc);
}

inline double closs_sum(double x, const std::vector<double>& pmf) {
  long double acc = 0.0L;
  for (std::size_t k = 0; k < pmf.size(); ++k)
    if (x > static_cast<double>(k)) acc += (x - k) * static_cast<long double>(pmf[k]);
  return static_cast<double>(acc);
}

// Normal first-order loss by Simpson integration of the tail integral.
inline double normal_loss_simpson(double x, double mu, double sigma) {
  const double hi = mu + 14.0 * sigma;
  if (x >= hi) return 0.0;
  const int n = 40000;
  const double h = (hi - x) / n;
  auto f = [&](double t) {
    const double u = (t - mu) / sigma;
    return (t - x) * std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * M_PI));
  };
  long double acc = f(x) + f(hi);
  for (int i = 1; i < n; ++i) acc += f(x + i * h) * (i % 2 ? 4.0 : 2.0);
  return static_cast<double>(acc * h / 3.0L);
}

// Conditional means of the N equal-probability regions, derived from the
// quantile-function view: E_i = N * integral of F^{-1}(u) over ((i-1)/N, i/N].
// For a discrete pmf the quantile is a step function, so each region mean is
// an exact sum of overlap widths.
inline std::vector<double> partition_means_quantile(const std::vector<double>& pmf,
                                                    int n) {
  std::vector<double> cdf(pmf.size());
  long double c = 0.0L;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    c += pmf[k];
    cdf[k] = static_cast<double>(c);
  }
  const double total = cdf.back();
  std::vector<double> means(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double a = total * i / n, b = total * (i + 1) / n;
    long double acc = 0.0L;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
      const double lo = k == 0 ? 0.0 : cdf[k - 1];
      const double width = std::min(b, cdf[k]) - std::max(a, lo);
      if (width > 0) acc += width * static_cast<long double>(k);
    }
    means[i] = static_cast<double>(acc * n / total);
  }
  return means;
}

// Backward induction for a fixed order-quantity vector on an explicit state
// map.  Demand atoms come from the callers' pmfs, not from the library.
struct DirectFixedQ {
  const std::vector<std::vector<double>>& pmf;  // one per period
  const lotsize::CostParams& costs;
  const std::vector<int>& q;
  std::map<std::pair<int, int>, double> memo;

  double immediate(int t, double x) {
    return costs.h * closs_sum(x, pmf[t - 1]) + costs.b * loss_sum(x, pmf[t - 1]);
  }

  double no_order(int t, int x) {
    long double acc = immediate(t, x);
    for (std::size_t d = 0; d < pmf[t - 1].size(); ++d)
      acc += pmf[t - 1][d] * value(t + 1, x - static_cast<int>(d));
    return static_cast<double>(acc);
  }

  double value(int t, int x) {
    if (t > static_cast<int>(pmf.size())) return 0.0;
    auto it = memo.find({t, x});
    if (it != memo.end()) return it->second;
    double v = no_order(t, x);
    if (q[t - 1] > 0) {
      double w = costs.K + costs.z * q[t - 1] + no_order(t, x + q[t - 1]);
      v = std::min(v, w);
    }
    memo.emplace(std::make_pair(t, x), v);
    return v;
  }
};

// Brute-force minimum over every subset of future order periods for the
// planned-quantity cost approximation.  A subset fixes the review chain;
// positions drain by the expected demand between reviews and jump by the
// planned quantity at each chosen order.  2^k paths for k eligible periods.
inline double delta_assignment_min(
    const std::vector<std::vector<lotsize::PiecewiseLinear>>& psi,
    const std::vector<double>& mean_prefix, const lotsize::CostParams& costs,
    const std::vector<int>& q, int t, int x) {
  const int T = static_cast<int>(q.size());
  std::vector<int> eligible;
  for (int m = t + 1; m <= T; ++m)
    if (q[m - 1] > 0) eligible.push_back(m);
  const int k = static_cast<int>(eligible.size());
  if (k > 20) throw std::runtime_error("subset enumeration too large");
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << k); ++mask) {
    std::vector<int> reviews{t};
    for (int i = 0; i < k; ++i)
      if (mask & (1 << i)) reviews.push_back(eligible[i]);
    long double cost = 0.0L;
    double lift = 0.0;
    for (std::size_t r = 0; r < reviews.size(); ++r) {
      const int j = reviews[r];
      const int m = r + 1 < reviews.size() ? reviews[r + 1] : T + 1;
      const double drain = mean_prefix[j - 1] - mean_prefix[t - 1];
      cost += psi[j][m].eval(x - drain + lift);
      if (m <= T) {
        cost += costs.K + costs.z * q[m - 1];
        lift += q[m - 1];
      }
    }
    best = std::min(best, static_cast<double>(cost));
  }
  return best;
}

// Splitmix-style hash for reproducible pseudo-random test instances.
inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double unit(std::uint64_t seed, std::uint64_t k) {
  return (mix(seed * 0x9e3779b97f4a7c15ULL + k) >> 11) * 0x1.0p-53;
}

}  // namespace oracle
