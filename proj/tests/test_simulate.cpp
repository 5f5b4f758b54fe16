#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <vector>

#include "lotsize/sdp.hpp"
#include "lotsize/simulate.hpp"

using lotsize::DemandModel;
using lotsize::Instance;
using lotsize::PolicyKind;
using lotsize::PolicyParams;
using lotsize::SimulateOptions;

namespace {

Instance example_small() {
  Instance inst;
  inst.id = "small";
  inst.demand = DemandModel::poisson({2.0, 1.0, 5.0, 3.0});
  inst.costs = {5.0, 0.0, 1.0, 3.0};
  inst.x0 = 0;
  inst.qmax = 9;
  return inst;
}

struct ThreadOverride {
  explicit ThreadOverride(const char* v) { setenv("LOTSIZE_THREADS", v, 1); }
  ~ThreadOverride() { unsetenv("LOTSIZE_THREADS"); }
};

}  // namespace

TEST_CASE("simulated mean agrees with the exact evaluation") {
  auto inst = example_small();
  auto sol = lotsize::solve_sQt_enum(inst, inst.qmax);
  auto rep = lotsize::simulate_policy(inst, sol.policy, 200000, 1);
  REQUIRE(rep.runs == 200000);
  REQUIRE(std::abs(rep.mean - sol.expected_cost) <= rep.ci_half_width);
  REQUIRE(rep.stderr_mean > 0);
  REQUIRE(rep.ci_half_width == Catch::Approx(2.576 * rep.stderr_mean));
}

TEST_CASE("same seed reproduces the run stream bit for bit") {
  auto inst = example_small();
  auto pol = lotsize::solve_sS(inst, inst.qmax).policy;
  SimulateOptions opt;
  opt.keep_costs = true;
  auto a = lotsize::simulate_policy(inst, pol, 20000, 7, opt);
  auto b = lotsize::simulate_policy(inst, pol, 20000, 7, opt);
  REQUIRE(a.mean == b.mean);
  REQUIRE(a.stderr_mean == b.stderr_mean);
  REQUIRE(a.costs == b.costs);
}

TEST_CASE("thread count does not change the result") {
  auto inst = example_small();
  auto pol = lotsize::solve_sS(inst, inst.qmax).policy;
  double baseline;
  {
    ThreadOverride env("1");
    baseline = lotsize::simulate_policy(inst, pol, 50000, 3).mean;
  }
  for (const char* workers : {"2", "3", "7"}) {
    ThreadOverride env(workers);
    REQUIRE(lotsize::simulate_policy(inst, pol, 50000, 3).mean == baseline);
  }
}

TEST_CASE("different seeds draw different demand streams") {
  auto inst = example_small();
  auto pol = lotsize::solve_sS(inst, inst.qmax).policy;
  auto a = lotsize::simulate_policy(inst, pol, 20000, 1);
  auto b = lotsize::simulate_policy(inst, pol, 20000, 2);
  REQUIRE(a.mean != b.mean);
  REQUIRE(std::abs(a.mean - b.mean) <= 5 * (a.ci_half_width + b.ci_half_width));
}

TEST_CASE("reported mean matches the kept per-run costs") {
  auto inst = example_small();
  auto pol = lotsize::solve_sS(inst, inst.qmax).policy;
  SimulateOptions opt;
  opt.keep_costs = true;
  auto rep = lotsize::simulate_policy(inst, pol, 30000, 11, opt);
  REQUIRE(rep.costs.size() == 30000);
  long double acc = 0.0L;
  for (double c : rep.costs) acc += c;
  REQUIRE(rep.mean ==
          Catch::Approx(static_cast<double>(acc / 30000)).epsilon(1e-12));
}

TEST_CASE("zero demand with no orders costs nothing") {
  Instance inst;
  inst.id = "still";
  inst.demand = DemandModel::empirical({{1.0}, {1.0}, {1.0}});
  inst.costs = {5.0, 0.0, 1.0, 3.0};
  inst.x0 = 0;
  PolicyParams pol;
  pol.kind = PolicyKind::sQt;
  pol.s.assign(3, lotsize::never_order);
  pol.level.assign(3, 0);
  auto rep = lotsize::simulate_policy(inst, pol, 1000, 1);
  REQUIRE(rep.mean == 0.0);
  REQUIRE(rep.stderr_mean == 0.0);
}

TEST_CASE("suppressing the first order raises the cost when one is due") {
  auto inst = example_small();
  auto sol = lotsize::solve_sQt_enum(inst, inst.qmax);
  REQUIRE(inst.x0 < sol.policy.s[0]);
  SimulateOptions hold;
  hold.hold_first_period = true;
  auto plain = lotsize::simulate_policy(inst, sol.policy, 100000, 5);
  auto held = lotsize::simulate_policy(inst, sol.policy, 100000, 5, hold);
  REQUIRE(held.mean > plain.mean);
  const double exact_held = lotsize::evaluate_policy(inst, sol.policy, true);
  REQUIRE(std::abs(held.mean - exact_held) <= held.ci_half_width);
}

TEST_CASE("simulation validates its inputs") {
  auto inst = example_small();
  auto pol = lotsize::solve_sS(inst, inst.qmax).policy;
  REQUIRE_THROWS_AS(lotsize::simulate_policy(inst, pol, 0, 1),
                    lotsize::validation_error);
  PolicyParams stub;
  stub.kind = PolicyKind::sS;
  stub.s.assign(2, 0);
  stub.level.assign(2, 1);
  REQUIRE_THROWS_AS(lotsize::simulate_policy(inst, stub, 100, 1),
                    lotsize::validation_error);
}

TEST_CASE("gap arithmetic") {
  REQUIRE(lotsize::optimality_gap(100.0, 105.0) == Catch::Approx(5.0));
  REQUIRE(lotsize::optimality_gap(22.5, 22.5) == Catch::Approx(0.0));
  REQUIRE(lotsize::optimality_gap(481.0546, 503.0) ==
          Catch::Approx(4.5619).margin(1e-3));
  REQUIRE_THROWS_AS(lotsize::optimality_gap(0.0, 1.0),
                    lotsize::validation_error);
}
