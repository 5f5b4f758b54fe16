#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "lotsize/demand.hpp"
#include "oracles.hpp"

using lotsize::DemandModel;
using lotsize::Pmf;
using lotsize::RangeDemand;

namespace {
double total_mass(const Pmf& a) {
  return std::accumulate(a.p.begin(), a.p.end(), 0.0);
}
}  // namespace

TEST_CASE("poisson atoms match the multiplicative recursion") {
  for (double rate : {0.3, 2.0, 7.5, 40.0}) {
    auto d = RangeDemand::poisson(rate);
    auto ref = oracle::poisson_pmf(rate);
    const auto& a = d.atoms();
    REQUIRE(a.max_value() >= static_cast<int>(rate));
    for (int k = 0; k <= a.max_value(); ++k)
      REQUIRE(a.mass(k) == Catch::Approx(ref[k]).margin(1e-14));
    REQUIRE(total_mass(a) >= 1.0 - 1e-12);
    REQUIRE(total_mass(a) <= 1.0 + 1e-12);
  }
}

TEST_CASE("discrete loss functions equal direct sums") {
  auto d = RangeDemand::poisson(6.0);
  auto ref = oracle::poisson_pmf(6.0);
  for (double x : {-3.0, 0.0, 1.0, 5.0, 6.0, 11.0, 40.0}) {
    REQUIRE(d.loss(x) == Catch::Approx(oracle::loss_sum(x, ref)).margin(1e-10));
    REQUIRE(d.complementary_loss(x) ==
            Catch::Approx(oracle::closs_sum(x, ref)).margin(1e-10));
  }
  Pmf emp;
  emp.p = {0.1, 0.0, 0.4, 0.3, 0.2};
  auto e = RangeDemand::empirical(emp.p);
  for (double x : {-1.0, 0.0, 2.0, 3.5, 9.0}) {
    REQUIRE(e.loss(x) == Catch::Approx(oracle::loss_sum(x, emp.p)).margin(1e-12));
    REQUIRE(e.complementary_loss(x) ==
            Catch::Approx(oracle::closs_sum(x, emp.p)).margin(1e-12));
  }
}

TEST_CASE("complementary loss satisfies Lhat(x) = L(x) + x - mean") {
  std::vector<RangeDemand> ds;
  ds.push_back(RangeDemand::poisson(3.2));
  ds.push_back(RangeDemand::normal(50.0, 15.0));
  ds.push_back(RangeDemand::empirical({0.25, 0.5, 0.25}));
  for (const auto& d : ds)
    for (double x = -5.0; x <= 80.0; x += 2.5) {
      const double lhs = d.complementary_loss(x);
      const double rhs = d.loss(x) + x - d.mean();
      REQUIRE(lhs == Catch::Approx(rhs).margin(1e-9));
    }
}

TEST_CASE("normal loss closed form matches numeric integration") {
  auto d = RangeDemand::normal(20.0, 6.0);
  for (double x : {-10.0, 0.0, 14.0, 20.0, 26.0, 50.0}) {
    const double ref = oracle::normal_loss_simpson(x, 20.0, 6.0);
    REQUIRE(d.loss(x) == Catch::Approx(ref).margin(1e-8));
  }
}

TEST_CASE("normal atoms form a lattice with the right mass and mean") {
  auto d = RangeDemand::normal(12.0, 3.0);
  const auto& a = d.atoms();
  REQUIRE(total_mass(a) >= 1.0 - 1e-9);
  REQUIRE(a.mean() == Catch::Approx(12.0).margin(0.02));

  auto z = RangeDemand::normal(4.4, 0.0);
  const auto& az = z.atoms();
  REQUIRE(az.mean() == Catch::Approx(4.4).margin(1e-12));
  REQUIRE(az.mass(4) == Catch::Approx(0.6).margin(1e-12));
  REQUIRE(az.mass(5) == Catch::Approx(0.4).margin(1e-12));
}

TEST_CASE("quantile inverts the cdf on discrete support") {
  auto d = RangeDemand::poisson(9.0);
  for (double p : {0.01, 0.25, 0.5, 0.9, 0.999}) {
    const double q = d.quantile(p);
    REQUIRE(d.cdf(q) >= p - 1e-12);
    if (q > 0) REQUIRE(d.cdf(q - 1) < p + 1e-12);
  }
  REQUIRE_THROWS_AS(d.quantile(0.0), lotsize::validation_error);
  REQUIRE_THROWS_AS(d.quantile(1.0), lotsize::validation_error);
}

TEST_CASE("period ranges convolve demand across periods") {
  auto pois = DemandModel::poisson({2.0, 1.0, 5.0, 3.0});
  REQUIRE(pois.range(2, 4).mean() == Catch::Approx(9.0).margin(1e-12));
  REQUIRE(pois.range(1, 1).mean() == Catch::Approx(2.0).margin(1e-12));

  std::vector<std::vector<double>> pmfs = {{0.5, 0.5}, {0.2, 0.3, 0.5}};
  auto emp = DemandModel::empirical(pmfs);
  auto r = emp.range(1, 2);
  std::vector<double> conv(4, 0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) conv[i + j] += pmfs[0][i] * pmfs[1][j];
  for (int k = 0; k < 4; ++k)
    REQUIRE(r.atoms().mass(k) == Catch::Approx(conv[k]).margin(1e-12));

  auto norm = DemandModel::normal({10.0, 20.0}, {3.0, 4.0});
  auto nr = norm.range(1, 2);
  REQUIRE(nr.mean() == Catch::Approx(30.0).margin(1e-12));
  // variance adds: sigma = 5
  const double ref = oracle::normal_loss_simpson(32.0, 30.0, 5.0);
  REQUIRE(nr.loss(32.0) == Catch::Approx(ref).margin(1e-8));
}

TEST_CASE("expected immediate cost combines holding and backorder parts") {
  auto model = DemandModel::poisson({4.0});
  lotsize::CostParams costs{0.0, 0.0, 2.0, 7.0};
  auto ref = oracle::poisson_pmf(4.0);
  for (int y : {-2, 0, 3, 8}) {
    const double want =
        2.0 * oracle::closs_sum(y, ref) + 7.0 * oracle::loss_sum(y, ref);
    REQUIRE(lotsize::expected_immediate_cost(y, 1, model, costs) ==
            Catch::Approx(want).margin(1e-10));
  }
}

TEST_CASE("demand model validation rejects bad inputs") {
  REQUIRE_THROWS_AS(DemandModel::poisson({2.0, -1.0}).validate(),
                    lotsize::validation_error);
  REQUIRE_THROWS_AS(DemandModel::normal({5.0}, {-2.0}).validate(),
                    lotsize::validation_error);
  REQUIRE_THROWS_AS(DemandModel::empirical({{0.5, 0.4}}).validate(),
                    lotsize::validation_error);
  REQUIRE_NOTHROW(DemandModel::poisson({2.0, 1.0}).validate());
}
