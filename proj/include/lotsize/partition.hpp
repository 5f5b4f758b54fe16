#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "lotsize/core.hpp"
#include "lotsize/demand.hpp"

namespace lotsize {

/// Equal-probability partition of a demand distribution into N regions.
/// Region i carries mass 1/N; cond_mean[i] is the expected demand given
/// that it falls in region i and boundary[i] the right endpoint of region
/// i+1's predecessor (the i/N quantile), for i = 1..N-1.
struct Partition {
  std::vector<double> prob;      ///< region masses, each exactly 1/N
  std::vector<double> cond_mean; ///< conditional means, nondecreasing
  std::vector<double> boundary;  ///< interior region boundaries (N-1 quantiles)
  double mean = 0;               ///< mean of the partitioned distribution

  int regions() const { return static_cast<int>(prob.size()); }
};

/// Builds the equal-probability partition of d into n_regions regions.
/// Continuous distributions are cut at the i/n quantiles; discrete atoms
/// straddling a boundary are split so every region holds exactly mass 1/n.
inline Partition build_partition(const RangeDemand& d, int n_regions) {
  if (n_regions < 1) throw validation_error("partition needs at least one region");
  const int n = n_regions;
  Partition part;
  part.mean = d.mean();
  part.prob.assign(n, 1.0 / n);
  part.cond_mean.assign(n, 0.0);

  if (d.kind() == DemandKind::normal && d.sigma() > 0) {
    boost::math::normal_distribution<> std_normal;
    // E[Z | z_{i-1} < Z <= z_i] = n (phi(z_{i-1}) - phi(z_i)) for the
    // standard normal; shift and scale to (mu, sigma).
    double prev_z = 0, prev_pdf = 0; // region boundary z_0 = -inf has pdf 0
    for (int i = 0; i < n; ++i) {
      double zi, pdfi;
      if (i == n - 1) {
        zi = 0;
        pdfi = 0; // z_n = +inf
      } else {
        zi = boost::math::quantile(std_normal, static_cast<double>(i + 1) / n);
        pdfi = boost::math::pdf(std_normal, zi);
      }
      part.cond_mean[i] = d.mu() + d.sigma() * n * (prev_pdf - pdfi);
      if (i < n - 1) part.boundary.push_back(d.mu() + d.sigma() * zi);
      prev_z = zi;
      prev_pdf = pdfi;
    }
    (void)prev_z;
    return part;
  }

  // Discrete (or degenerate) support: walk the atoms and split any atom
  // that straddles a multiple of 1/n between the adjacent regions.
  const Pmf& a = d.atoms();
  std::vector<double> wsum(n, 0.0), wxsum(n, 0.0);
  double cum = 0;
  for (int k = 0; k <= a.max_value(); ++k) {
    double lo = cum;
    cum += a.p[k];
    double hi = cum;
    if (a.p[k] == 0) continue;
    int first = std::min(n - 1, static_cast<int>(std::floor(lo * n + 1e-15)));
    int last = std::min(n - 1, static_cast<int>(std::ceil(hi * n - 1e-15)) - 1);
    for (int i = std::max(first, 0); i <= last; ++i) {
      double w = std::min(hi, static_cast<double>(i + 1) / n) -
                 std::max(lo, static_cast<double>(i) / n);
      if (w <= 0) continue;
      wsum[i] += w;
      wxsum[i] += w * k;
    }
  }
  for (int i = 0; i < n; ++i)
    part.cond_mean[i] = wsum[i] > 0 ? wxsum[i] / wsum[i] : part.mean;
  for (int i = 1; i < n; ++i)
    part.boundary.push_back(d.quantile(static_cast<double>(i) / n));
  // Guard against rounding jitter from split atoms.
  for (int i = 1; i < n; ++i)
    part.cond_mean[i] = std::max(part.cond_mean[i], part.cond_mean[i - 1]);
  return part;
}

/// Piecewise-linear lower bound on the complementary loss E[max(x - d, 0)]:
/// the maximum over i of sum_{k<=i} p_k (x - E[d | region k]).
inline double piecewise_complementary_loss_lb(const Partition& part, double x) {
  double best = 0; // i = 0 gives the empty sum
  double acc = 0;
  for (int i = 0; i < part.regions(); ++i) {
    acc += part.prob[i] * (x - part.cond_mean[i]);
    best = std::max(best, acc);
  }
  return best;
}

/// Piecewise-linear lower bound on the loss E[max(d - x, 0)], obtained from
/// the complementary bound through the identity L(x) = Lhat(x) - x + E[d].
inline double piecewise_loss_lb(const Partition& part, double x) {
  return piecewise_complementary_loss_lb(part, x) - x + part.mean;
}

/// Convex piecewise-linear function given by ascending breakpoints, the
/// value at each breakpoint and the slope after it. slope_left applies
/// before the first breakpoint.
struct PiecewiseLinear {
  std::vector<double> bp;
  std::vector<double> val;
  std::vector<double> slope; ///< slope[i] applies on [bp[i], bp[i+1])
  double slope_left = 0;

  double eval(double x) const {
    if (bp.empty()) return 0;
    if (x <= bp.front()) return val.front() + slope_left * (x - bp.front());
    auto it = std::upper_bound(bp.begin(), bp.end(), x);
    std::size_t i = static_cast<std::size_t>(it - bp.begin()) - 1;
    return val[i] + slope[i] * (x - bp[i]);
  }

  /// Leftmost continuous minimiser.
  double argmin() const {
    if (bp.empty() || slope_left >= 0) return bp.empty() ? 0.0 : bp.front();
    for (std::size_t i = 0; i < bp.size(); ++i)
      if (slope[i] >= 0) return bp[i];
    return bp.back(); // decreasing throughout; minimum at the last breakpoint
  }

  double min_value() const { return eval(argmin()); }

  /// Smallest integer minimiser, by convexity either neighbour of argmin().
  int integer_argmin() const {
    double xc = argmin();
    int lo = static_cast<int>(std::floor(xc));
    int hi = lo + 1;
    return eval(lo) <= eval(hi) ? lo : hi;
  }

  /// Pointwise sum, valid because convexity is closed under addition.
  PiecewiseLinear& operator+=(const PiecewiseLinear& o) {
    if (o.bp.empty()) return *this;
    if (bp.empty()) {
      *this = o;
      return *this;
    }
    std::vector<double> merged;
    merged.reserve(bp.size() + o.bp.size());
    std::merge(bp.begin(), bp.end(), o.bp.begin(), o.bp.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    PiecewiseLinear sum;
    sum.bp = merged;
    sum.slope_left = slope_left + o.slope_left;
    sum.val.resize(merged.size());
    sum.slope.resize(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
      sum.val[i] = eval(merged[i]) + o.eval(merged[i]);
      sum.slope[i] = slope_after(merged[i]) + o.slope_after(merged[i]);
    }
    *this = std::move(sum);
    return *this;
  }

  double slope_after(double x) const {
    if (bp.empty()) return 0;
    if (x < bp.front()) return slope_left;
    auto it = std::upper_bound(bp.begin(), bp.end(), x);
    return slope[static_cast<std::size_t>(it - bp.begin()) - 1];
  }
};

/// The piecewise-linear lower bound h * Lhat_lb + b * L_lb as an explicit
/// convex function of the position x. Breakpoints sit at the conditional
/// means; the slope between breakpoints i and i+1 is (h+b) * (i+1)/N - b.
inline PiecewiseLinear loss_lb_function(const Partition& part, double h, double b) {
  const int n = part.regions();
  PiecewiseLinear f;
  f.slope_left = -b;
  double x0 = part.cond_mean[0];
  // h*Lhat_lb(E_1) = 0 and b*L_lb(E_1) = b*(mean - E_1).
  double v = b * (part.mean - x0);
  f.bp.push_back(x0);
  f.val.push_back(v);
  f.slope.push_back((h + b) * (1.0 / n) - b);
  for (int i = 1; i < n; ++i) {
    double xi = part.cond_mean[i];
    if (xi > f.bp.back()) {
      v = f.val.back() + f.slope.back() * (xi - f.bp.back());
      f.bp.push_back(xi);
      f.val.push_back(v);
      f.slope.push_back((h + b) * (static_cast<double>(i + 1) / n) - b);
    } else {
      // Coincident conditional means collapse into one kink.
      f.slope.back() = (h + b) * (static_cast<double>(i + 1) / n) - b;
    }
  }
  return f;
}

} // namespace lotsize
