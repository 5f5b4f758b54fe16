#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "lotsize/core.hpp"

namespace lotsize {

/// Probability mass kept when truncating an unbounded discrete support.
inline constexpr double tail_mass_kept = 1.0 - 1e-12;

enum class DemandKind { poisson, normal, empirical };

inline const char* to_string(DemandKind k) {
  switch (k) {
    case DemandKind::poisson: return "poisson";
    case DemandKind::normal: return "normal";
    case DemandKind::empirical: return "empirical";
  }
  return "?";
}

/// Truncated probability mass function on {0, 1, ..., p.size()-1}.
/// Masses are kept as computed (total may fall short of one by the
/// truncated tail, at most 1e-12 for generated supports).
struct Pmf {
  std::vector<double> p;

  int max_value() const { return static_cast<int>(p.size()) - 1; }
  double mass(int k) const {
    return (k >= 0 && k < static_cast<int>(p.size())) ? p[k] : 0.0;
  }
  double mean() const {
    double m = 0;
    for (std::size_t k = 0; k < p.size(); ++k) m += static_cast<double>(k) * p[k];
    return m;
  }
};

/// Demand distribution of a single period or of a sum of consecutive
/// periods. Poisson and normal families are closed under convolution;
/// empirical supports are convolved explicitly.
class RangeDemand {
public:
  static RangeDemand poisson(double rate) {
    RangeDemand d;
    d.kind_ = DemandKind::poisson;
    d.rate_ = rate;
    return d;
  }

  static RangeDemand normal(double mu, double sigma) {
    RangeDemand d;
    d.kind_ = DemandKind::normal;
    d.mu_ = mu;
    d.sigma_ = sigma;
    return d;
  }

  static RangeDemand empirical(std::vector<double> pmf) {
    RangeDemand d;
    d.kind_ = DemandKind::empirical;
    d.pmf_ = std::move(pmf);
    return d;
  }

  DemandKind kind() const { return kind_; }
  double rate() const { return rate_; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }

  double mean() const {
    switch (kind_) {
      case DemandKind::poisson: return rate_;
      case DemandKind::normal: return mu_;
      case DemandKind::empirical: {
        double m = 0;
        for (std::size_t k = 0; k < pmf_.size(); ++k) m += static_cast<double>(k) * pmf_[k];
        return m;
      }
    }
    return 0;
  }

  /// P(demand <= x).
  double cdf(double x) const {
    switch (kind_) {
      case DemandKind::poisson:
        if (x < 0) return 0;
        if (rate_ == 0) return 1;
        return boost::math::cdf(boost::math::poisson_distribution<>(rate_),
                                std::floor(x));
      case DemandKind::normal:
        if (sigma_ == 0) return x >= mu_ ? 1.0 : 0.0;
        return boost::math::cdf(boost::math::normal_distribution<>(mu_, sigma_), x);
      case DemandKind::empirical: {
        if (x < 0) return 0;
        double c = 0;
        int top = std::min<int>(static_cast<int>(std::floor(x)),
                                static_cast<int>(pmf_.size()) - 1);
        for (int k = 0; k <= top; ++k) c += pmf_[k];
        return std::min(c, 1.0);
      }
    }
    return 0;
  }

  /// Smallest x with cdf(x) >= p, for p in (0, 1).
  double quantile(double p) const {
    if (!(p > 0 && p < 1)) throw validation_error("quantile probability must lie in (0,1)");
    switch (kind_) {
      case DemandKind::poisson: {
        if (rate_ == 0) return 0;
        boost::math::poisson_distribution<> dist(rate_);
        // round the library estimate to the exact smallest-k inverse
        double k = std::max(std::floor(boost::math::quantile(dist, p)), 0.0);
        while (boost::math::cdf(dist, k) < p) ++k;
        while (k > 0 && boost::math::cdf(dist, k - 1) >= p) --k;
        return k;
      }
      case DemandKind::normal:
        if (sigma_ == 0) return mu_;
        return boost::math::quantile(boost::math::normal_distribution<>(mu_, sigma_), p);
      case DemandKind::empirical: {
        double c = 0;
        for (std::size_t k = 0; k < pmf_.size(); ++k) {
          c += pmf_[k];
          if (c >= p) return static_cast<double>(k);
        }
        return static_cast<double>(pmf_.size() - 1);
      }
    }
    return 0;
  }

  /// First-order loss E[max(demand - x, 0)], computed by summation over the
  /// truncated support for discrete families and in closed form for normal.
  double loss(double x) const {
    switch (kind_) {
      case DemandKind::poisson:
      case DemandKind::empirical: {
        const Pmf& a = atoms();
        double s = 0;
        for (int k = a.max_value(); k >= 0 && k > x; --k) s += (k - x) * a.p[k];
        return s;
      }
      case DemandKind::normal: {
        if (sigma_ == 0) return std::max(mu_ - x, 0.0);
        const double u = (x - mu_) / sigma_;
        boost::math::normal_distribution<> std_normal;
        return sigma_ * (boost::math::pdf(std_normal, u) -
                         u * (1.0 - boost::math::cdf(std_normal, u)));
      }
    }
    return 0;
  }

  /// Complementary first-order loss E[max(x - demand, 0)]. Exact finite sum
  /// for discrete families; closed form for normal.
  double complementary_loss(double x) const {
    switch (kind_) {
      case DemandKind::poisson:
      case DemandKind::empirical: {
        const Pmf& a = atoms();
        double s = 0;
        int top = std::min(a.max_value(), static_cast<int>(std::floor(x)));
        for (int k = 0; k <= top; ++k) s += (x - k) * a.p[k];
        return s;
      }
      case DemandKind::normal: {
        if (sigma_ == 0) return std::max(x - mu_, 0.0);
        const double u = (x - mu_) / sigma_;
        boost::math::normal_distribution<> std_normal;
        return sigma_ * (boost::math::pdf(std_normal, u) +
                         u * boost::math::cdf(std_normal, u));
      }
    }
    return 0;
  }

  /// Integer-support mass function used by transition expectations and by
  /// inverse-transform sampling. Normal demand is discretised to the integer
  /// lattice with the mass below 0.5 collected at zero.
  const Pmf& atoms() const {
    if (atoms_.p.empty()) atoms_ = build_atoms();
    return atoms_;
  }

private:
  Pmf build_atoms() const {
    Pmf out;
    switch (kind_) {
      case DemandKind::poisson: {
        if (rate_ == 0) {
          out.p = {1.0};
          break;
        }
        boost::math::poisson_distribution<> dist(rate_);
        double cum = 0;
        for (int k = 0;; ++k) {
          out.p.push_back(boost::math::pdf(dist, k));
          cum += out.p.back();
          if (cum >= tail_mass_kept && k >= static_cast<int>(rate_)) break;
        }
        break;
      }
      case DemandKind::normal: {
        if (sigma_ == 0) {
          // Deterministic demand: split between neighbouring lattice points
          // so the discretised mean matches mu exactly.
          double lo = std::floor(std::max(mu_, 0.0));
          double frac = std::max(mu_, 0.0) - lo;
          out.p.assign(static_cast<std::size_t>(lo) + 2, 0.0);
          out.p[static_cast<std::size_t>(lo)] = 1.0 - frac;
          out.p[static_cast<std::size_t>(lo) + 1] = frac;
          if (out.p.back() == 0.0) out.p.pop_back();
          break;
        }
        boost::math::normal_distribution<> dist(mu_, sigma_);
        double prev = 0.0; // cdf at k - 0.5, clipped at zero
        double cum = 0;
        for (int k = 0;; ++k) {
          double next = boost::math::cdf(dist, k + 0.5);
          out.p.push_back(std::max(next - prev, 0.0));
          cum += out.p.back();
          prev = next;
          if (cum >= tail_mass_kept && k >= static_cast<int>(mu_)) break;
        }
        break;
      }
      case DemandKind::empirical:
        out.p = pmf_;
        break;
    }
    return out;
  }

  DemandKind kind_ = DemandKind::poisson;
  double rate_ = 0;
  double mu_ = 0;
  double sigma_ = 0;
  std::vector<double> pmf_;
  mutable Pmf atoms_;
};

/// Per-period demand specification over a planning horizon.
class DemandModel {
public:
  static DemandModel poisson(std::vector<double> rates) {
    DemandModel m;
    m.kind_ = DemandKind::poisson;
    m.a_ = std::move(rates);
    m.validate();
    return m;
  }

  static DemandModel normal(std::vector<double> means, std::vector<double> sigmas) {
    DemandModel m;
    m.kind_ = DemandKind::normal;
    m.a_ = std::move(means);
    m.b_ = std::move(sigmas);
    m.validate();
    return m;
  }

  /// Normal demand with a common coefficient of variation: sigma_t = cv * mean_t.
  static DemandModel normal_cv(std::vector<double> means, double cv) {
    std::vector<double> sigmas(means.size());
    for (std::size_t t = 0; t < means.size(); ++t) sigmas[t] = cv * means[t];
    return normal(std::move(means), std::move(sigmas));
  }

  static DemandModel empirical(std::vector<std::vector<double>> pmfs) {
    DemandModel m;
    m.kind_ = DemandKind::empirical;
    m.pmfs_ = std::move(pmfs);
    m.validate();
    return m;
  }

  DemandKind kind() const { return kind_; }
  int horizon() const {
    return static_cast<int>(kind_ == DemandKind::empirical ? pmfs_.size() : a_.size());
  }

  const std::vector<double>& rates() const { return a_; }
  const std::vector<double>& means() const { return a_; }
  const std::vector<double>& sigmas() const { return b_; }
  const std::vector<std::vector<double>>& pmfs() const { return pmfs_; }

  /// Distribution of the demand in period t (1-based).
  RangeDemand period(int t) const { return range(t, t); }

  /// Distribution of the total demand over periods j..k inclusive (1-based).
  RangeDemand range(int j, int k) const {
    if (j < 1 || k > horizon() || j > k)
      throw validation_error("demand range [" + std::to_string(j) + "," +
                             std::to_string(k) + "] outside horizon");
    switch (kind_) {
      case DemandKind::poisson: {
        double r = 0;
        for (int t = j; t <= k; ++t) r += a_[t - 1];
        return RangeDemand::poisson(r);
      }
      case DemandKind::normal: {
        double mu = 0, var = 0;
        for (int t = j; t <= k; ++t) {
          mu += a_[t - 1];
          var += b_[t - 1] * b_[t - 1];
        }
        return RangeDemand::normal(mu, std::sqrt(var));
      }
      case DemandKind::empirical: {
        std::vector<double> acc = pmfs_[j - 1];
        for (int t = j + 1; t <= k; ++t) {
          const std::vector<double>& q = pmfs_[t - 1];
          std::vector<double> next(acc.size() + q.size() - 1, 0.0);
          for (std::size_t u = 0; u < acc.size(); ++u) {
            if (acc[u] == 0) continue;
            for (std::size_t v = 0; v < q.size(); ++v) next[u + v] += acc[u] * q[v];
          }
          acc = std::move(next);
        }
        return RangeDemand::empirical(std::move(acc));
      }
    }
    return RangeDemand::poisson(0);
  }

  double mean_of(int t) const { return period(t).mean(); }

  void validate() const {
    std::string msg;
    if (horizon() < 1) msg += "horizon must cover at least one period\n";
    switch (kind_) {
      case DemandKind::poisson:
        for (std::size_t t = 0; t < a_.size(); ++t)
          if (!(a_[t] >= 0) || !std::isfinite(a_[t]))
            msg += "rate[" + std::to_string(t + 1) + "] must be finite and >= 0\n";
        break;
      case DemandKind::normal:
        if (a_.size() != b_.size()) msg += "means and sigmas differ in length\n";
        for (std::size_t t = 0; t < a_.size(); ++t)
          if (!std::isfinite(a_[t]) || !(a_[t] >= 0))
            msg += "mean[" + std::to_string(t + 1) + "] must be finite and >= 0\n";
        for (std::size_t t = 0; t < b_.size(); ++t)
          if (!(b_[t] >= 0) || !std::isfinite(b_[t]))
            msg += "sigma[" + std::to_string(t + 1) + "] must be finite and >= 0\n";
        break;
      case DemandKind::empirical:
        for (std::size_t t = 0; t < pmfs_.size(); ++t) {
          const auto& pmf = pmfs_[t];
          if (pmf.empty()) {
            msg += "pmf[" + std::to_string(t + 1) + "] is empty\n";
            continue;
          }
          double sum = 0;
          bool neg = false;
          for (double v : pmf) {
            if (v < 0) neg = true;
            sum += v;
          }
          if (neg) msg += "pmf[" + std::to_string(t + 1) + "] has negative mass\n";
          if (std::abs(sum - 1.0) > 1e-9)
            msg += "pmf[" + std::to_string(t + 1) + "] mass sums to " +
                   std::to_string(sum) + ", expected 1\n";
        }
        break;
    }
    if (!msg.empty()) throw validation_error(msg);
  }

private:
  DemandKind kind_ = DemandKind::poisson;
  std::vector<double> a_; // poisson rates or normal means
  std::vector<double> b_; // normal standard deviations
  std::vector<std::vector<double>> pmfs_;
};

/// Expected single-period holding and backorder cost when the post-order
/// position in period t is y: h * E[max(y - d, 0)] + b * E[max(d - y, 0)].
inline double expected_immediate_cost(double y, int t, const DemandModel& model,
                                      const CostParams& costs) {
  RangeDemand d = model.period(t);
  return costs.h * d.complementary_loss(y) + costs.b * d.loss(y);
}

} // namespace lotsize
