#include "asymgreen/oracle.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <optional>

#include "asymgreen/special.hpp"
#include "asymgreen/taylor.hpp"

namespace asymgreen {

namespace odeint = boost::numeric::odeint;

namespace {

// f or V_S, optionally reflected: mirror maps g(z) to sign * g(-z).
class Field {
 public:
  Field(const Piecewise& p, bool mirror, double sign) : p_(&p), mirror_(mirror), sign_(mirror ? sign : 1.0) {
    for (double b : p.breakpoints()) cuts_.push_back(mirror ? -b : b);
    std::sort(cuts_.begin(), cuts_.end());
  }

  const std::vector<double>& cuts() const { return cuts_; }
  // piece holding the open segment (a, b)
  std::size_t piece_for(double a, double b) const {
    const double mid = 0.5 * (a + b);
    return p_->locate(mirror_ ? -mid : mid);
  }
  double eval(double z, std::size_t piece) const {
    return sign_ * evaluate(p_->pieces()[piece].expr, mirror_ ? -z : z);
  }
  double operator()(double z) const { return sign_ * (*p_)(mirror_ ? -z : z); }
  // a point inside the tail on side dir beyond which the field is constant, if any
  std::optional<double> constant_tail(double dir) const {
    const double edge = cuts_.empty() ? 0.0 : (dir > 0 ? cuts_.back() : cuts_.front());
    const double z = edge + dir;
    if (depends_on_z(p_->pieces()[piece_for(z, z)].expr)) return std::nullopt;
    return z;
  }
  // side > 0: piece to the right of z in the field's own coordinate
  Taylor<double> jet(double z, int order, int side) const {
    if (!mirror_) return p_->jet(z, order, side);
    Taylor<double> t = p_->jet(-z, order, -side);
    for (std::size_t j = 0; j <= t.order(); ++j) t[j] *= sign_ * (j % 2 == 0 ? 1.0 : -1.0);
    return t;
  }

 private:
  const Piecewise* p_;
  bool mirror_;
  double sign_;
  std::vector<double> cuts_;
};

template <std::size_t N>
using State = std::array<cplx, N>;

// Integrates y' = rhs(z, piece, y) from z0 to z1, stopping at every cut so that
// each piece is only evaluated on its own closed segment.
struct NoRenorm {
  template <class S>
  void operator()(S&) const {}
};

template <std::size_t N, class Rhs, class Renorm = NoRenorm>
void integrate_segments(State<N>& y, double z0, double z1, const Field& field, const Rhs& rhs,
                        const OracleConfig& cfg, const Renorm& renorm = {}) {
  if (z0 == z1) return;
  const double dir = z1 > z0 ? 1.0 : -1.0;
  std::vector<double> pts{z0};
  if (dir > 0) {
    for (double c : field.cuts())
      if (c > z0 && c < z1) pts.push_back(c);
  } else {
    for (auto it = field.cuts().rbegin(); it != field.cuts().rend(); ++it)
      if (*it < z0 && *it > z1) pts.push_back(*it);
  }
  pts.push_back(z1);

  auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State<N>>>(cfg.ode_tol, cfg.ode_tol);
  long steps = 0;
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    const double a = pts[s], b = pts[s + 1];
    const std::size_t piece = field.piece_for(a, b);
    auto sys = [&](const State<N>& u, State<N>& du, double z) { rhs(z, piece, u, du); };
    double z = a;
    double dz = dir * std::min(std::abs(b - a), 0.05);
    const double snap = 1e-13 * std::max(1.0, std::abs(b));
    while (dir * (b - z) > snap) {
      if (dir * (z + dz - b) > 0) dz = b - z;
      if (stepper.try_step(sys, y, z, dz) != odeint::success &&
          std::abs(dz) < 1e-14 * std::max(1.0, std::abs(z)))
        throw OracleError("ODE step size underflow at z = " + format_number(z));
      renorm(y);
      if (++steps > cfg.max_steps) throw OracleError("ODE step budget exhausted near z = " + format_number(z));
      for (const auto& v : y)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw OracleError("ODE solution blew up near z = " + format_number(z) + " (resonant k?)");
    }
    z = b;
  }
}

// outermost point within distance L of the anchor where |g| stays below the cap;
// in a constant tail the adiabatic start is exact, so no further than necessary
double start_point(const Field& g, double anchor, double dir, double L, double cap, bool& capped) {
  capped = false;
  if (const auto t = g.constant_tail(dir)) return dir > 0 ? std::max(anchor, *t) : std::min(anchor, *t);
  auto ok = [&](double z) {
    const double v = g(z);
    return std::isfinite(v) && std::abs(v) <= cap;
  };
  const double far = anchor + dir * L;
  if (ok(far)) return far;
  if (!ok(anchor)) throw OracleError("|potential| exceeds the tail cap already at z = " + format_number(anchor));
  capped = true;
  double lo = anchor, hi = far;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

// root of w nearest to guess
cplx root_near(cplx w, cplx guess) {
  const cplx r = std::sqrt(w);
  return std::abs(r - guess) <= std::abs(r + guess) ? r : -r;
}

Taylor<cplx> to_complex(const Taylor<double>& t) {
  Taylor<cplx> c(t.order());
  for (std::size_t j = 0; j <= t.order(); ++j) c[j] = t[j];
  return c;
}

// S_r (sigma = +1) or S_l (sigma = -1) from the local quadratic
// 2ik S(1 - S) + sigma f (1 - 2S) - sigma S' = 0, iterated on S'.
cplx adiabatic_S(const Field& f, double z, cplx k, int sigma, int iterations) {
  const int P = iterations + 1;
  const Taylor<cplx> F = to_complex(f.jet(z, P, sigma > 0 ? +1 : -1));
  const cplx I(0, 1);
  Taylor<cplx> Sp(static_cast<std::size_t>(P));
  Taylor<cplx> S;
  // leading-order branch fixes the root; later iterations follow it continuously
  const cplx q0 = special::upper_sqrt(k * k - F[0] * F[0], k);
  for (int it = 0; it <= iterations; ++it) {
    const Taylor<cplx> Q2 = (-(F * F) + k * k) + Sp * (double(sigma) * 2.0 * I * k);
    const Taylor<cplx> Q = taylor::sqrt_with_root(Q2, root_near(Q2[0], q0));
    S = (F * (double(sigma) * I) + k - Q) * (1.0 / (2.0 * k));
    if (S.order() == 0) break;
    Sp = S.derivative();
  }
  return S[0];
}

// w = u_+ - ik (sigma = +1) or v = u_- + ik (sigma = -1) from u^2 = V - k^2 - u'.
cplx adiabatic_u(const Taylor<double>& V, cplx k, int sigma, int iterations) {
  const Taylor<cplx> Vt = to_complex(V);
  const cplx I(0, 1);
  Taylor<cplx> Wp(Vt.order());
  Taylor<cplx> W;
  const cplx kappa0 = special::upper_sqrt(k * k - Vt[0], k);
  for (int it = 0; it <= iterations; ++it) {
    const Taylor<cplx> K2 = (-Vt + k * k) + Wp;
    const Taylor<cplx> kappa = taylor::sqrt_with_root(K2, root_near(K2[0], kappa0));
    W = kappa * (double(sigma) * I) - double(sigma) * I * k;
    if (W.order() == 0) break;
    Wp = W.derivative();
  }
  return W[0];
}

cplx adiabatic_u(const Field& V, double z, cplx k, int sigma, int iterations) {
  return adiabatic_u(V.jet(z, iterations + 1, sigma > 0 ? -1 : +1), k, sigma, iterations);
}

// V_S = f^2 + f' from the jet of f
cplx adiabatic_u_from_f(const Field& f, double z, cplx k, int sigma, int iterations) {
  const Taylor<double> F = f.jet(z, iterations + 2, sigma > 0 ? -1 : +1);
  return adiabatic_u(F * F + F.derivative(), k, sigma, iterations);
}

struct SweepResult {
  cplx S_r_y, S_r_x, S_l_x, S_l_y, logG;
  bool capped_minus, capped_plus;
};

SweepResult sweep_S(const Field& f, double x, double y, cplx k, double L, const OracleConfig& cfg) {
  const cplx ik(-k.imag(), k.real());
  auto rhs_r = [&](double z, std::size_t piece, const State<2>& u, State<2>& du) {
    const double fz = f.eval(z, piece);
    du[0] = 2.0 * ik * u[0] * (1.0 - u[0]) + fz * (1.0 - 2.0 * u[0]);
    du[1] = u[0];
  };
  auto rhs_l = [&](double z, std::size_t piece, const State<2>& u, State<2>& du) {
    const double fz = f.eval(z, piece);
    du[0] = -2.0 * ik * u[0] * (1.0 - u[0]) + fz * (1.0 - 2.0 * u[0]);
    du[1] = u[0];
  };
  SweepResult r{};
  const double zs = start_point(f, y, -1, L, cfg.tail_cap, r.capped_minus);
  State<2> sr{adiabatic_S(f, zs, k, +1, cfg.adiabatic_iterations), 0};
  integrate_segments(sr, zs, y, f, rhs_r, cfg);
  r.S_r_y = sr[0];
  sr[1] = 0;
  integrate_segments(sr, y, x, f, rhs_r, cfg);
  r.S_r_x = sr[0];
  const cplx Ir = sr[1];

  const double ze = start_point(f, x, +1, L, cfg.tail_cap, r.capped_plus);
  State<2> sl{adiabatic_S(f, ze, k, -1, cfg.adiabatic_iterations), 0};
  integrate_segments(sl, ze, x, f, rhs_l, cfg);
  r.S_l_x = sl[0];
  sl[1] = 0;
  integrate_segments(sl, x, y, f, rhs_l, cfg);
  r.S_l_y = sl[0];
  const cplx Il = -sl[1];

  const cplx one_minus_x = 1.0 - (r.S_r_x + r.S_l_x), one_minus_y = 1.0 - (r.S_r_y + r.S_l_y);
  if (one_minus_x == cplx(0) || one_minus_y == cplx(0)) throw OracleError("S = 1 reached (branch point of log G)");
  r.logG = ik * (x - y) - ik * (Ir + Il) - 0.5 * std::log(one_minus_x) - 0.5 * std::log(one_minus_y);
  return r;
}

SweepResult sweep_schrodinger(const Field& V, double x, double y, cplx k, double L, const OracleConfig& cfg) {
  const cplx ik(-k.imag(), k.real());
  auto rhs_w = [&](double z, std::size_t piece, const State<2>& u, State<2>& du) {
    du[0] = V.eval(z, piece) - 2.0 * ik * u[0] - u[0] * u[0];
    du[1] = u[0];
  };
  auto rhs_v = [&](double z, std::size_t piece, const State<2>& u, State<2>& du) {
    du[0] = V.eval(z, piece) + 2.0 * ik * u[0] - u[0] * u[0];
    du[1] = 0;
  };
  SweepResult r{};
  const double ze = start_point(V, x, +1, L, cfg.tail_cap, r.capped_plus);
  State<2> w{adiabatic_u(V, ze, k, +1, cfg.adiabatic_iterations), 0};
  integrate_segments(w, ze, x, V, rhs_w, cfg);
  w[1] = 0;
  integrate_segments(w, x, y, V, rhs_w, cfg);
  const cplx Iw = -w[1];
  const double zs = start_point(V, y, -1, L, cfg.tail_cap, r.capped_minus);
  State<2> v{adiabatic_u(V, zs, k, -1, cfg.adiabatic_iterations), 0};
  integrate_segments(v, zs, y, V, rhs_v, cfg);
  const cplx ratio = 1.0 + (w[0] - v[0]) / (2.0 * ik);
  if (ratio == cplx(0)) throw OracleError("vanishing Wronskian (k at a pole of G)");
  r.logG = ik * (x - y) + Iw - std::log(ratio);
  return r;
}

// psi' = f psi + phi, phi' = (V - k^2) psi - f phi with (f, V) = (f, 0) or (0, V_S);
// state (psi, phi, log scale), rescaled after every step. Survives real zeros of psi.
SweepResult sweep_linear(const Field& g, bool f_based, double x, double y, cplx k, double L,
                         const OracleConfig& cfg) {
  const cplx ik(-k.imag(), k.real());
  const cplx k2 = k * k;
  auto rhs = [&](double z, std::size_t piece, const State<3>& u, State<3>& du) {
    const double gz = g.eval(z, piece);
    const double fz = f_based ? gz : 0.0, Vz = f_based ? 0.0 : gz;
    du[0] = fz * u[0] + u[1];
    du[1] = (Vz - k2) * u[0] - fz * u[1];
    du[2] = 0;
  };
  auto renorm = [](State<3>& u) {
    const double n = std::abs(u[0]) + std::abs(u[1]);
    if (n > 0 && std::isfinite(n)) {
      u[0] /= n;
      u[1] /= n;
      u[2] += std::log(n);
    }
  };
  auto start = [&](double z, int sigma) {
    // log-derivative u = psi'/psi, phi = psi' - f psi
    const cplx w = f_based ? adiabatic_u_from_f(g, z, k, sigma, cfg.adiabatic_iterations)
                           : adiabatic_u(g, z, k, sigma, cfg.adiabatic_iterations);
    const cplx u = w + double(sigma) * ik;
    const double fz = f_based ? g(z) : 0.0;
    return State<3>{cplx(1), u - fz, cplx(0)};
  };
  SweepResult r{};
  const double ze = start_point(g, x, +1, L, cfg.tail_cap, r.capped_plus);
  State<3> p = start(ze, +1);
  integrate_segments(p, ze, x, g, rhs, cfg, renorm);
  const cplx log_psi_x = std::log(p[0]) + p[2];
  integrate_segments(p, x, y, g, rhs, cfg, renorm);
  const double zs = start_point(g, y, -1, L, cfg.tail_cap, r.capped_minus);
  State<3> m = start(zs, -1);
  integrate_segments(m, zs, y, g, rhs, cfg, renorm);
  // W = psi_+' psi_- - psi_+ psi_-' = phi_+ psi_- - psi_+ phi_-
  const cplx W = p[1] * m[0] - p[0] * m[1];
  if (W == cplx(0) || p[0] == cplx(0) || m[0] == cplx(0)) throw OracleError("vanishing Wronskian (k at a pole of G)");
  r.logG = std::log(2.0 * ik) + log_psi_x - p[2] + std::log(m[0]) - std::log(W);
  return r;
}

RiccatiForm resolve_form(const PotentialSpec& spec, RiccatiForm form) {
  if (form == RiccatiForm::Auto) return spec.f ? RiccatiForm::S : RiccatiForm::Schrodinger;
  if (form == RiccatiForm::S && !spec.f) throw PotentialError("S-form oracle needs f; '" + spec.name + "' gives V_S");
  if (form == RiccatiForm::Schrodinger && !spec.vs) throw PotentialError("Schrodinger-form oracle needs V_S");
  if (form == RiccatiForm::Linear && !spec.f && !spec.vs) throw PotentialError("linear-form oracle needs f or V_S");
  return form;
}

void check_k(cplx k) {
  if (k == cplx(0)) throw std::invalid_argument("k = 0 is not allowed");
  if (k.imag() < 0) throw std::invalid_argument("Im k must be >= 0");
}

}  // namespace

ScatteringTriple finite_scattering(double x1, double x2, cplx k, const PotentialSpec& spec, const OracleConfig& cfg) {
  if (x1 > x2) throw std::invalid_argument("finite_scattering requires x1 <= x2");
  if (k == cplx(0)) throw std::invalid_argument("k = 0 is not allowed");
  if (!spec.f) throw PotentialError("finite_scattering needs f; '" + spec.name + "' gives V_S");
  ScatteringTriple t;
  t.x1 = x1;
  t.x2 = x2;
  const Field f(*spec.f, false, 1.0);
  const cplx ik(-k.imag(), k.real());
  State<3> u{cplx(1), cplx(0), cplx(0)};
  integrate_segments(
      u, x1, x2, f,
      [&](double z, std::size_t piece, const State<3>& s, State<3>& ds) {
        const double fz = f.eval(z, piece);
        ds[0] = ik * s[0] - fz * s[1] * s[0];
        ds[1] = 2.0 * ik * s[1] + fz * (1.0 - s[1] * s[1]);
        ds[2] = -fz * s[0] * s[0];
      },
      cfg);
  t.tau = u[0];
  t.R_r = u[1];
  t.R_l = u[2];
  return t;
}

SemiInfiniteS semi_infinite_S(double x, cplx k, const PotentialSpec& spec, const OracleConfig& cfg) {
  check_k(k);
  if (!spec.f) throw PotentialError("S_r, S_l need f; '" + spec.name + "' gives V_S");
  const Field f(*spec.f, cfg.mirror, -1.0);
  const double xx = cfg.mirror ? -x : x;
  SemiInfiniteS out;
  std::optional<SweepResult> prev;
  for (double L = cfg.L0; L <= cfg.L_max; L *= 2) {
    const SweepResult r = sweep_S(f, xx, xx, k, L, cfg);
    out.S_r = cfg.mirror ? r.S_l_x : r.S_r_x;
    out.S_l = cfg.mirror ? r.S_r_x : r.S_l_x;
    out.L = L;
    out.capped_minus = r.capped_minus;
    out.capped_plus = r.capped_plus;
    if (prev && std::abs(r.S_r_x - prev->S_r_x) < cfg.tol && std::abs(r.S_l_x - prev->S_l_x) < cfg.tol) {
      out.converged = true;
      break;
    }
    prev = r;
  }
  return out;
}

const char* form_name(RiccatiForm f) {
  switch (f) {
    case RiccatiForm::Auto: return "auto";
    case RiccatiForm::S: return "S";
    case RiccatiForm::Schrodinger: return "schrodinger";
    case RiccatiForm::Linear: return "linear";
  }
  return "?";
}

namespace {

GreenEval oracle_in_form(double x, double y, cplx k, const PotentialSpec& spec, RiccatiForm form,
                         const OracleConfig& cfg) {
  GreenEval out;
  out.form = form;
  // the reflected problem has G(-y, -x) = G(x, y)
  const double xx = cfg.mirror ? -y : x, yy = cfg.mirror ? -x : y;
  const bool use_f = form == RiccatiForm::S || (form == RiccatiForm::Linear && spec.f);
  const Field field = use_f ? Field(*spec.f, cfg.mirror, -1.0) : Field(*spec.vs, cfg.mirror, 1.0);
  std::optional<SweepResult> prev;
  for (double L = cfg.L0; L <= cfg.L_max; L *= 2) {
    SweepResult r;
    switch (form) {
      case RiccatiForm::S: r = sweep_S(field, xx, yy, k, L, cfg); break;
      case RiccatiForm::Schrodinger: r = sweep_schrodinger(field, xx, yy, k, L, cfg); break;
      default: r = sweep_linear(field, use_f, xx, yy, k, L, cfg); break;
    }
    out.logG = r.logG;
    out.L = L;
    if (form == RiccatiForm::S) {
      if (cfg.mirror) {
        out.S_r = r.S_l_y, out.S_l = r.S_r_y, out.S_r_y = r.S_l_x, out.S_l_y = r.S_r_x;
      } else {
        out.S_r = r.S_r_x, out.S_l = r.S_l_x, out.S_r_y = r.S_r_y, out.S_l_y = r.S_l_y;
      }
      out.S = *out.S_r + *out.S_l;
      out.S_y = *out.S_r_y + *out.S_l_y;
    }
    // compare G rather than log G: the linear form fixes log G only modulo 2 pi i
    if (prev && std::abs(std::exp(r.logG - prev->logG) - 1.0) < cfg.tol) {
      out.converged = true;
      break;
    }
    prev = r;
  }
  out.G = std::exp(out.logG);
  return out;
}

}  // namespace

GreenEval oracle_logG(double x, double y, cplx k, const PotentialSpec& spec, const OracleConfig& cfg) {
  check_k(k);
  if (!(x > y)) throw std::invalid_argument("oracle_logG requires x > y");
  const RiccatiForm form = resolve_form(spec, cfg.form);
  if (cfg.form != RiccatiForm::Auto) return oracle_in_form(x, y, k, spec, form, cfg);
  try {
    return oracle_in_form(x, y, k, spec, form, cfg);
  } catch (const OracleError&) {
    // Riccati poles at real zeros of psi (real k, confining potentials)
    return oracle_in_form(x, y, k, spec, RiccatiForm::Linear, cfg);
  }
}

}  // namespace asymgreen
