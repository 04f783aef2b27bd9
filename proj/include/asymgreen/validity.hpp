#pragma once

#include <string>
#include <vector>

#include "asymgreen/potential.hpp"

namespace asymgreen {

enum class Regime { Sector, HalfPlane, RealAxis };
const char* regime_name(Regime r);

// Largest N for which k^N Delta_N -> 0 is guaranteed.  Invalid means even
// the leading behaviour is not controlled (the log G oscillates).
struct OrderCap {
  enum class Kind { Invalid, Bounded, Unbounded };
  Kind kind = Kind::Unbounded;
  int max_order = 0;

  static OrderCap invalid() { return {Kind::Invalid, 0}; }
  static OrderCap bounded(int n) { return {Kind::Bounded, n}; }
  bool allows(int n) const {
    return kind == Kind::Unbounded || (kind == Kind::Bounded && n <= max_order);
  }
  void limit_to(int n);
  // Invalid < Bounded(n) < Unbounded
  bool operator<=(const OrderCap& o) const;
  std::string to_string() const;
};

// additive correction to a_order from a jump strictly inside (y, x)
struct Correction {
  int order;
  double value;
  double location;
};

struct RegimeReport {
  Regime regime;
  OrderCap cap;
  std::vector<Correction> corrections;
  std::vector<std::string> notes;
};

struct ValidityReport {
  RegimeReport sector{Regime::Sector, {}, {}, {}};
  RegimeReport half_plane{Regime::HalfPlane, {}, {}, {}};
  RegimeReport real_axis{Regime::RealAxis, {}, {}, {}};
  std::vector<std::string> notes;

  const RegimeReport& get(Regime r) const;
  std::string to_string() const;
};

ValidityReport classify_validity(const PotentialSpec& spec, double x, double y);

}  // namespace asymgreen
