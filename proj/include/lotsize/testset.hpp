#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lotsize/core.hpp"
#include "lotsize/demand.hpp"
#include "lotsize/instance.hpp"
#include "lotsize/simulate.hpp"

namespace lotsize {

inline const std::vector<std::string>& demand_pattern_names() {
  static const std::vector<std::string> names = {
      "LCY1", "LCY2", "SIN1", "SIN2", "STAT",
      "RAND", "EMP1", "EMP2", "EMP3", "EMP4"};
  return names;
}

/// Mean-demand series of the named pattern over T periods, scaled into
/// [1, 7] except for the empirical patterns, which keep their zero-demand
/// stretches.  Closed forms, with u = (t-1)/(T-1) in [0, 1]:
///   LCY1  1 + 6 / (1 + exp(-10(u - 0.45)))     launch to maturity
///   LCY2  1 + 6 sin(pi u)                      growth, maturity, decline
///   SIN1  4 + 3 sin(2 pi u)                    strong oscillation
///   SIN2  4 + 1.5 sin(2 pi u)                  weak oscillation
///   STAT  4
///   RAND  1 + 6 * u01(seed, 0, t)              seeded uniform draws
///   EMP1..EMP4 fixed 6-period series, index-stretched to other horizons.
inline std::vector<double> demand_pattern(const std::string& name, int T,
                                          std::uint64_t seed = 42) {
  if (T < 2) throw validation_error("pattern horizon must be >= 2");
  static const std::map<std::string, std::vector<double>> empirical = {
      {"EMP1", {3, 0, 0, 6, 5, 2}},
      {"EMP2", {0, 4, 6, 0, 0, 5}},
      {"EMP3", {7, 2, 0, 0, 3, 0}},
      {"EMP4", {2, 5, 0, 7, 0, 1}}};
  std::vector<double> out(static_cast<std::size_t>(T));
  for (int t = 1; t <= T; ++t) {
    const double u = static_cast<double>(t - 1) / (T - 1);
    double v = 0;
    if (name == "LCY1")
      v = 1 + 6 / (1 + std::exp(-10 * (u - 0.45)));
    else if (name == "LCY2")
      v = 1 + 6 * std::sin(3.14159265358979324 * u);
    else if (name == "SIN1")
      v = 4 + 3 * std::sin(2 * 3.14159265358979324 * u);
    else if (name == "SIN2")
      v = 4 + 1.5 * std::sin(2 * 3.14159265358979324 * u);
    else if (name == "STAT")
      v = 4;
    else if (name == "RAND")
      v = 1 + 6 * detail::u01(seed, 0, static_cast<std::uint64_t>(t));
    else if (auto it = empirical.find(name); it != empirical.end())
      v = it->second[static_cast<std::size_t>((t - 1) * 6 / T)];
    else
      throw validation_error("unknown demand pattern: " + name);
    out[static_cast<std::size_t>(t - 1)] = v;
  }
  return out;
}

/// One generated benchmark cell: the instance plus the grid coordinates it
/// came from, for pivot tables.
struct TestCase {
  Instance inst;
  std::map<std::string, std::string> tags;
};

/// The 6-period set: 10 patterns x 3 (K, b) sets x z in {0, 1}, Poisson
/// demand, h = 1, x0 = 0, order cap 9.
inline std::vector<TestCase> six_period_testset() {
  struct CostSet { int id; double K, b; };
  static const std::vector<CostSet> sets = {{1, 5, 3}, {2, 10, 3}, {3, 10, 7}};
  std::vector<TestCase> out;
  for (const auto& pattern : demand_pattern_names())
    for (const auto& cs : sets)
      for (int z = 0; z <= 1; ++z) {
        TestCase tc;
        tc.inst.demand = DemandModel::poisson(demand_pattern(pattern, 6));
        tc.inst.costs = {cs.K, static_cast<double>(z), 1, cs.b};
        tc.inst.x0 = 0;
        tc.inst.qmax = 9;
        tc.inst.partitions = 10;
        tc.inst.id = "p6-" + pattern + "-set" + std::to_string(cs.id) + "-z" +
                     std::to_string(z);
        tc.tags = {{"set", "6p"},
                   {"pattern", pattern},
                   {"costset", std::to_string(cs.id)},
                   {"K", std::to_string(static_cast<int>(cs.K))},
                   {"b", std::to_string(static_cast<int>(cs.b))},
                   {"z", std::to_string(z)}};
        out.push_back(std::move(tc));
      }
  return out;
}

/// The 25-period set: 10 patterns x rho in {0.1, 0.2, 0.3} x K in
/// {500, 1000, 1500} x b in {5, 10, 20} x z in {0, 1}, normal demand with
/// sigma_t = rho * mean_t, h = 1, x0 = 0, no order cap.  Pattern means are
/// scaled by 2 (into [2, 14]): large enough that order cycles span several
/// periods under these fixed costs, small enough that exact policy
/// evaluation over the full grid stays fast.
inline std::vector<TestCase> twentyfive_period_testset() {
  static const std::vector<double> rhos = {0.1, 0.2, 0.3};
  static const std::vector<int> ks = {500, 1000, 1500};
  static const std::vector<int> bs = {5, 10, 20};
  std::vector<TestCase> out;
  for (const auto& pattern : demand_pattern_names()) {
    std::vector<double> means = demand_pattern(pattern, 25);
    for (double& m : means) m *= 2;
    for (double rho : rhos)
      for (int K : ks)
        for (int b : bs)
          for (int z = 0; z <= 1; ++z) {
            TestCase tc;
            tc.inst.demand = DemandModel::normal_cv(means, rho);
            tc.inst.costs = {static_cast<double>(K), static_cast<double>(z),
                             1, static_cast<double>(b)};
            tc.inst.x0 = 0;
            tc.inst.partitions = 10;
            std::string rtag = rho == 0.1 ? "r1" : rho == 0.2 ? "r2" : "r3";
            tc.inst.id = "p25-" + pattern + "-" + rtag + "-K" +
                         std::to_string(K) + "-b" + std::to_string(b) + "-z" +
                         std::to_string(z);
            tc.tags = {{"set", "25p"},
                       {"pattern", pattern},
                       {"rho", rho == 0.1 ? "0.1" : rho == 0.2 ? "0.2" : "0.3"},
                       {"K", std::to_string(K)},
                       {"b", std::to_string(b)},
                       {"z", std::to_string(z)}};
            out.push_back(std::move(tc));
          }
  }
  return out;
}

} // namespace lotsize
