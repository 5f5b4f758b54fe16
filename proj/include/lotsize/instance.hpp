#pragma once

#include <cmath>
#include <string>

#include "lotsize/core.hpp"
#include "lotsize/demand.hpp"

namespace lotsize {

/// A lot-sizing instance: horizon, demand, costs and the initial position.
struct Instance {
  std::string id;
  DemandModel demand = DemandModel::poisson({0});
  CostParams costs;
  int x0 = 0;
  int qmax = -1;      ///< order-quantity cap for enumeration; -1 when unspecified
  int partitions = 0; ///< suggested piecewise-region count; 0 when unspecified

  int horizon() const { return demand.horizon(); }

  void validate() const {
    demand.validate();
    costs.validate();
    if (qmax < -1) throw validation_error("qmax must be >= 0 when given");
    if (partitions < 0)
      throw validation_error("partitions must be >= 1 when given");
  }
};

/// Smallest integer x such that the total horizon demand exceeds x with
/// probability at most eps.
inline int total_demand_bound(const Instance& inst, double eps = 1e-9) {
  RangeDemand total = inst.demand.range(1, inst.horizon());
  if (total.mean() == 0) return 0;
  return static_cast<int>(std::ceil(total.quantile(1.0 - eps)));
}

/// Position grid for order-up-to solves: reachable down-drift below x0 plus
/// headroom above for every sensible order-up-to level.
inline InventoryGrid grid_for_order_up_to(const Instance& inst) {
  int span = total_demand_bound(inst);
  InventoryGrid g;
  g.lo = inst.x0 - span - 2;
  g.hi = inst.x0 + span + 2;
  return g;
}

/// Position grid for a fixed quantity plan q: the top extension keeps
/// post-order lookups x + q_t on the grid for every reachable x.
inline InventoryGrid grid_for_quantities(const Instance& inst,
                                         const std::vector<int>& q) {
  int span = total_demand_bound(inst);
  int sum = 0, top = 0;
  for (int v : q) {
    sum += v;
    top = std::max(top, v);
  }
  InventoryGrid g;
  g.lo = inst.x0 - span - 2;
  g.hi = inst.x0 + sum + top + 2;
  return g;
}

} // namespace lotsize
