#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lotsize {

/// Sentinel reorder point for periods that never place an order.
/// Chosen so that "x < s" is false for every representable position.
inline constexpr int never_order = std::numeric_limits<int>::min() / 2;

/// Thrown when input data fails validation. The message lists every
/// offending field, one per line.
class validation_error : public std::invalid_argument {
public:
  explicit validation_error(const std::string& what)
      : std::invalid_argument(what) {}
};

/// Thrown when a solve would exceed its configured work budget.
class budget_error : public std::runtime_error {
public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

/// Cost coefficients of the lot-sizing problem.
struct CostParams {
  double K = 0; ///< fixed cost per order
  double z = 0; ///< unit ordering cost
  double h = 0; ///< holding cost per unit per period
  double b = 0; ///< backorder penalty per unit per period

  void validate() const {
    std::string msg;
    if (!(K >= 0)) msg += "K must be >= 0\n";
    if (!(z >= 0)) msg += "z must be >= 0\n";
    if (!(h >= 0)) msg += "h must be >= 0\n";
    if (!(b >= 0)) msg += "b must be >= 0\n";
    if (!msg.empty()) throw validation_error(msg);
  }
};

/// Ordering cost of a batch of size q: K + z*q for q > 0, zero otherwise.
inline double order_cost(const CostParams& c, double q) {
  return q > 0 ? c.K + c.z * q : 0.0;
}

/// Closed integer interval of inventory positions.
struct InventoryGrid {
  int lo = 0;
  int hi = 0;

  int size() const { return hi - lo + 1; }
  bool contains(int x) const { return x >= lo && x <= hi; }
  int index(int x) const { return x - lo; }

  void validate() const {
    if (lo >= hi) throw validation_error("grid lower bound must be < upper bound");
  }
};

enum class PolicyKind { sS, sQt, sQ };

inline const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::sS: return "sS";
    case PolicyKind::sQt: return "sQt";
    case PolicyKind::sQ: return "sQ";
  }
  return "?";
}

/// Review-policy parameters. An order is placed in period t exactly when
/// the opening inventory position x is below s[t]; its size is S[t] - x
/// under an order-up-to policy and level[t] under a fixed-quantity policy.
struct PolicyParams {
  PolicyKind kind = PolicyKind::sS;
  std::vector<int> s;     ///< reorder points, one per period
  std::vector<int> level; ///< order-up-to levels (sS) or order quantities (sQt, sQ)

  int horizon() const { return static_cast<int>(s.size()); }

  void validate() const {
    std::string msg;
    if (s.empty()) msg += "policy must cover at least one period\n";
    if (s.size() != level.size()) msg += "s and level series differ in length\n";
    if (kind == PolicyKind::sS) {
      for (std::size_t t = 0; t < s.size() && t < level.size(); ++t)
        if (s[t] != never_order && s[t] > level[t])
          msg += "s[" + std::to_string(t + 1) + "] exceeds S[" + std::to_string(t + 1) + "]\n";
    } else {
      for (std::size_t t = 0; t < level.size(); ++t)
        if (level[t] < 0)
          msg += "q[" + std::to_string(t + 1) + "] must be >= 0\n";
    }
    if (!msg.empty()) throw validation_error(msg);
  }
};

} // namespace lotsize
