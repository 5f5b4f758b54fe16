#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lotsize/bench.hpp"
#include "lotsize/io.hpp"
#include "lotsize/testset.hpp"

using lotsize::DemandModel;
using lotsize::Instance;
using lotsize::PolicyKind;
using lotsize::PolicyParams;

namespace {

Instance roundtrip(const Instance& inst) {
  std::stringstream buf;
  lotsize::save_instance(inst, buf);
  return lotsize::parse_instance(buf, inst.id);
}

std::string message_of(const std::string& text) {
  std::istringstream in(text);
  try {
    lotsize::parse_instance(in, "bad");
  } catch (const lotsize::validation_error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("poisson instance round-trips exactly") {
  Instance inst;
  inst.id = "p";
  inst.demand = DemandModel::poisson({2.0, 1.25, 5.5, 3.0});
  inst.costs = {5.0, 0.75, 1.0, 3.5};
  inst.x0 = -2;
  inst.qmax = 9;
  inst.partitions = 12;
  auto back = roundtrip(inst);
  REQUIRE(back.id == inst.id);
  REQUIRE(back.demand.rates() == inst.demand.rates());
  REQUIRE(back.costs.K == inst.costs.K);
  REQUIRE(back.costs.z == inst.costs.z);
  REQUIRE(back.costs.h == inst.costs.h);
  REQUIRE(back.costs.b == inst.costs.b);
  REQUIRE(back.x0 == inst.x0);
  REQUIRE(back.qmax == inst.qmax);
  REQUIRE(back.partitions == inst.partitions);
}

TEST_CASE("normal instances round-trip through explicit sigmas") {
  Instance inst;
  inst.id = "n";
  inst.demand = DemandModel::normal_cv({4.0, 8.0, 6.0}, 0.3);
  inst.costs = {100.0, 0.0, 1.0, 10.0};
  inst.x0 = 0;
  auto back = roundtrip(inst);
  REQUIRE(back.demand.means() == inst.demand.means());
  REQUIRE(back.demand.sigmas() == inst.demand.sigmas());
  REQUIRE(back.qmax == inst.qmax);
}

TEST_CASE("empirical instance round-trips its pmf rows") {
  Instance inst;
  inst.id = "e";
  inst.demand =
      DemandModel::empirical({{0.5, 0.25, 0.25}, {1.0}, {0.125, 0.875}});
  inst.costs = {5.0, 0.0, 1.0, 3.0};
  inst.x0 = 1;
  auto back = roundtrip(inst);
  REQUIRE(back.demand.pmfs() == inst.demand.pmfs());
}

TEST_CASE("instance parser reports the offending line") {
  const auto msg = message_of(
      "id x\nhorizon 2\ndemand poisson\nrates 1 2\nK 5\nh 1\nb 3\nwat 7\n");
  REQUIRE(msg.find("line 8") != std::string::npos);
  REQUIRE(msg.find("wat") != std::string::npos);
}

TEST_CASE("instance parser checks series lengths and field sets") {
  REQUIRE(message_of("id x\nhorizon 3\ndemand poisson\nrates 1 2\nK 5\nh 1\nb 3\n")
              .find("horizon is 3") != std::string::npos);
  REQUIRE(message_of("id x\nhorizon 2\ndemand normal\nmeans 1 2\nK 5\nh 1\nb 3\n")
              .find("exactly one of sigmas or cv") != std::string::npos);
  REQUIRE(message_of("id x\nhorizon 2\ndemand normal\nmeans 1 2\nsigmas 1 1\n"
                     "cv 0.5\nK 5\nh 1\nb 3\n")
              .find("exactly one of sigmas or cv") != std::string::npos);
  REQUIRE(message_of("id x\nhorizon 2\ndemand empirical\npmf 1\nK 5\nh 1\nb 3\n")
              .find("pmf lines count 1") != std::string::npos);
  REQUIRE(message_of("horizon 2\ndemand poisson\nrates 1 2\nK 5\nb 3\n")
              .find("missing cost field") != std::string::npos);
}

TEST_CASE("instance validation rejects bad numbers") {
  REQUIRE_THROWS_AS(
      (void)roundtrip([] {
        Instance inst;
        inst.id = "neg";
        inst.demand = DemandModel::poisson({1.0, 2.0});
        inst.costs = {5.0, 0.0, -1.0, 3.0};
        return inst;
      }()),
      lotsize::validation_error);
}

TEST_CASE("policies round-trip including the never sentinel") {
  PolicyParams pol;
  pol.kind = PolicyKind::sQt;
  pol.s = {4, lotsize::never_order, -3};
  pol.level = {5, 0, 7};
  std::stringstream buf;
  lotsize::save_policy(pol, buf);
  auto back = lotsize::parse_policy(buf);
  REQUIRE(back.kind == pol.kind);
  REQUIRE(back.s == pol.s);
  REQUIRE(back.level == pol.level);

  std::istringstream bad("kind sQt\ns 1 2\nlevel 3\n");
  REQUIRE_THROWS_AS(lotsize::parse_policy(bad), lotsize::validation_error);
  std::istringstream nokind("s 1 2\nlevel 3 4\n");
  REQUIRE_THROWS_AS(lotsize::parse_policy(nokind), lotsize::validation_error);
}

TEST_CASE("csv fields are quoted per RFC 4180") {
  REQUIRE(lotsize::csv_escape("plain-1.5") == "plain-1.5");
  REQUIRE(lotsize::csv_escape("a,b") == "\"a,b\"");
  REQUIRE(lotsize::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  REQUIRE(lotsize::csv_escape("two\nlines") == "\"two\nlines\"");
  std::ostringstream row;
  lotsize::write_csv_row(row, {"a", "b,c", ""});
  REQUIRE(row.str() == "a,\"b,c\",\r\n");
}

TEST_CASE("six-period set has the full grid of cases") {
  auto cases = lotsize::six_period_testset();
  REQUIRE(cases.size() == 60);
  std::set<std::string> ids;
  for (const auto& tc : cases) {
    ids.insert(tc.inst.id);
    REQUIRE(tc.inst.horizon() == 6);
    REQUIRE(tc.inst.qmax == 9);
    REQUIRE(tc.inst.partitions == 10);
    for (double r : tc.inst.demand.rates()) {
      REQUIRE(r >= 0.0);
      REQUIRE(r <= 7.0);
    }
    REQUIRE(tc.tags.count("pattern") == 1);
    REQUIRE(tc.tags.count("costset") == 1);
  }
  REQUIRE(ids.size() == 60);
}

TEST_CASE("twenty-five period set has the full grid of cases") {
  auto cases = lotsize::twentyfive_period_testset();
  REQUIRE(cases.size() == 540);
  std::set<std::string> ids;
  for (const auto& tc : cases) {
    ids.insert(tc.inst.id);
    REQUIRE(tc.inst.horizon() == 25);
    REQUIRE(tc.inst.qmax == -1);
  }
  REQUIRE(ids.size() == 540);
}

TEST_CASE("summary rows average the per-case gaps") {
  lotsize::TestCase tc;
  tc.inst.id = "t";
  tc.tags = {{"pattern", "STAT"}};
  std::vector<lotsize::CaseResult> results(3);
  double gaps[] = {1.0, 2.0, 3.0};
  for (int i = 0; i < 3; ++i) {
    results[i].tc = tc;
    lotsize::MethodRun run;
    run.method = "sQt-Heuristic";
    run.gap = gaps[i];
    results[i].runs.push_back(run);
  }
  auto rows = lotsize::summarize(results, {"pattern"});
  bool seen = false;
  for (const auto& row : rows) {
    REQUIRE(row.avg_gap == Catch::Approx(2.0));
    REQUIRE(row.cells == 3);
    seen = true;
  }
  REQUIRE(seen);
}
