#include <catch2/catch_amalgamated.hpp>

#include "lotsize/partition.hpp"
#include "oracles.hpp"

using lotsize::build_partition;
using lotsize::Partition;
using lotsize::PiecewiseLinear;
using lotsize::RangeDemand;

TEST_CASE("equal-probability partition means match the quantile view") {
  auto d = RangeDemand::poisson(5.0);
  auto ref = oracle::poisson_pmf(5.0);
  for (int n : {2, 4, 10}) {
    auto part = build_partition(d, n);
    auto means = oracle::partition_means_quantile(ref, n);
    REQUIRE(part.regions() == n);
    double wsum = 0;
    for (int i = 0; i < n; ++i) {
      REQUIRE(part.prob[i] == Catch::Approx(1.0 / n).margin(1e-15));
      REQUIRE(part.cond_mean[i] == Catch::Approx(means[i]).margin(1e-9));
      if (i > 0) REQUIRE(part.cond_mean[i] >= part.cond_mean[i - 1] - 1e-12);
      wsum += part.prob[i] * part.cond_mean[i];
    }
    REQUIRE(wsum == Catch::Approx(d.mean()).margin(1e-9));
  }
}

TEST_CASE("normal partition means use the conditional-tail formula") {
  auto d = RangeDemand::normal(30.0, 8.0);
  auto part = build_partition(d, 4);
  double wsum = 0;
  for (int i = 0; i < 4; ++i) wsum += part.prob[i] * part.cond_mean[i];
  REQUIRE(wsum == Catch::Approx(30.0).margin(1e-9));
  // symmetric distribution: means mirror around the mean
  REQUIRE(part.cond_mean[0] + part.cond_mean[3] == Catch::Approx(60.0).margin(1e-7));
  REQUIRE(part.cond_mean[1] + part.cond_mean[2] == Catch::Approx(60.0).margin(1e-7));
}

TEST_CASE("piecewise bound stays below the exact loss and tightens with more regions") {
  std::vector<RangeDemand> ds;
  ds.push_back(RangeDemand::poisson(6.0));
  ds.push_back(RangeDemand::normal(25.0, 7.0));
  for (int which = 0; which < 2; ++which) {
    const RangeDemand& d = ds[which];
    const double lo = -5.0, hi = 60.0;
    double last_gap = 1e100;
    for (int n : {5, 10, 20}) {
      auto part = build_partition(d, n);
      double worst = 0;
      for (int i = 0; i < 1000; ++i) {
        const double x = lo + (hi - lo) * i / 999.0;
        const double lb = lotsize::piecewise_complementary_loss_lb(part, x);
        const double exact = d.complementary_loss(x);
        REQUIRE(lb <= exact + 1e-9);
        const double lb2 = lotsize::piecewise_loss_lb(part, x);
        REQUIRE(lb2 <= d.loss(x) + 1e-9);
        worst = std::max(worst, exact - lb);
      }
      REQUIRE(worst <= last_gap + 1e-12);
      last_gap = worst;
    }
  }
}

TEST_CASE("piecewise bound is exact at region boundaries") {
  auto d = RangeDemand::normal(40.0, 10.0);
  auto part = build_partition(d, 8);
  for (double q : part.boundary) {
    const double lb = lotsize::piecewise_complementary_loss_lb(part, q);
    REQUIRE(lb == Catch::Approx(d.complementary_loss(q)).margin(1e-7));
  }
}

TEST_CASE("piecewise linear function evaluates as a max of affine pieces") {
  auto d = RangeDemand::poisson(4.0);
  auto part = build_partition(d, 6);
  const double h = 1.0, b = 3.0;
  auto f = lotsize::loss_lb_function(part, h, b);
  for (double x = -6.0; x <= 20.0; x += 0.37) {
    const double want = h * lotsize::piecewise_complementary_loss_lb(part, x) +
                        b * lotsize::piecewise_loss_lb(part, x);
    REQUIRE(f.eval(x) == Catch::Approx(want).margin(1e-9));
  }
}

TEST_CASE("piecewise linear minimiser sits where the slope turns nonnegative") {
  auto d = RangeDemand::poisson(9.0);
  auto part = build_partition(d, 10);
  auto f = lotsize::loss_lb_function(part, 1.0, 9.0);
  const double xc = f.argmin();
  REQUIRE(f.eval(xc - 0.5) >= f.min_value() - 1e-12);
  REQUIRE(f.eval(xc + 0.5) >= f.min_value() - 1e-12);
  const int xi = f.integer_argmin();
  REQUIRE(f.eval(xi) <= f.eval(xi - 1) + 1e-12);
  REQUIRE(f.eval(xi) <= f.eval(xi + 1) + 1e-12);
}

TEST_CASE("summing piecewise linear functions merges breakpoints") {
  auto pa = build_partition(RangeDemand::poisson(3.0), 5);
  auto pb = build_partition(RangeDemand::poisson(7.0), 7);
  auto fa = lotsize::loss_lb_function(pa, 1.0, 4.0);
  auto fb = lotsize::loss_lb_function(pb, 2.0, 1.0);
  auto fs = fa;
  fs += fb;
  for (double x = -4.0; x <= 25.0; x += 0.61)
    REQUIRE(fs.eval(x) == Catch::Approx(fa.eval(x) + fb.eval(x)).margin(1e-9));
}
