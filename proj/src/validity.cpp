#include "asymgreen/validity.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace asymgreen {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Sector: return "SECTOR";
    case Regime::HalfPlane: return "HALF_PLANE";
    case Regime::RealAxis: return "REAL_AXIS";
  }
  return "?";
}

void OrderCap::limit_to(int n) {
  if (kind == Kind::Invalid) return;
  if (kind == Kind::Unbounded || n < max_order) {
    kind = Kind::Bounded;
    max_order = n;
  }
}

bool OrderCap::operator<=(const OrderCap& o) const {
  if (kind != o.kind) return static_cast<int>(kind) < static_cast<int>(o.kind);
  return kind != Kind::Bounded || max_order <= o.max_order;
}

std::string OrderCap::to_string() const {
  switch (kind) {
    case Kind::Invalid: return "invalid";
    case Kind::Unbounded: return "unbounded";
    case Kind::Bounded: return std::to_string(max_order);
  }
  return "?";
}

const RegimeReport& ValidityReport::get(Regime r) const {
  switch (r) {
    case Regime::Sector: return sector;
    case Regime::HalfPlane: return half_plane;
    case Regime::RealAxis: return real_axis;
  }
  return sector;
}

std::string ValidityReport::to_string() const {
  std::string out;
  for (const RegimeReport* r : {&sector, &half_plane, &real_axis}) {
    out += std::string(regime_name(r->regime)) + ": max_order " + r->cap.to_string() + "\n";
    for (const auto& c : r->corrections) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "  correction at order %d: %+.17g (jump at z = %.17g)\n", c.order, c.value,
                    c.location);
      out += buf;
    }
    for (const auto& n : r->notes) out += "  note: " + n + "\n";
  }
  for (const auto& n : notes) out += "note: " + n + "\n";
  return out;
}

ValidityReport classify_validity(const PotentialSpec& spec, double x, double y) {
  if (!(x > y)) throw std::invalid_argument("classify_validity requires x > y");
  for (const auto& j : spec.jumps)
    if (x == j.location || y == j.location)
      throw std::invalid_argument("x or y lies exactly at the jump z = " + format_number(j.location));

  ValidityReport rep;
  for (const auto& j : spec.jumps) {
    const int M = j.order;
    if (j.location > y && j.location < x) {
      const double corr = (M % 2 == 0 ? 0.5 : -0.5) * j.magnitude * j.magnitude;
      for (RegimeReport* r : {&rep.sector, &rep.half_plane, &rep.real_axis}) {
        r->cap.limit_to(2 * M + 1);
        r->corrections.push_back({2 * M + 2, corr, j.location});
      }
    } else {
      // outside (y, x): e^{2ik(y - z0)}-type terms, exponentially small only in the sector
      rep.real_axis.cap.limit_to(M);
      rep.half_plane.cap.limit_to(M);
      rep.half_plane.notes.push_back("jump at z = " + format_number(j.location) +
                                     " outside (y, x) limits fixed-Im k validity to N <= " + std::to_string(M));
    }
  }
  for (double b : spec.smooth_joins)
    rep.notes.push_back("breakpoint z = " + format_number(b) +
                        " treated as smooth (no jump detected through the probed derivative orders)");

  const bool exp_tail =
      spec.tail_minus.kind == TailKind::DivergesOther || spec.tail_plus.kind == TailKind::DivergesOther;
  if (exp_tail) {
    rep.half_plane.cap = OrderCap::invalid();
    rep.half_plane.corrections.clear();
    rep.half_plane.notes.push_back("tail of f grows exponentially; fixed-Im k limit not covered");
  }
  if (!spec.tail_minus.finite() || !spec.tail_plus.finite()) {
    rep.real_axis.cap = OrderCap::invalid();
    rep.real_axis.corrections.clear();
    rep.real_axis.notes.push_back("f(+-infinity) not both finite; real-axis limit not covered");
  }
  for (const auto& n : spec.notes) rep.notes.push_back(n);
  return rep;
}

}  // namespace asymgreen
