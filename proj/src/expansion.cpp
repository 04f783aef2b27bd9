#include "asymgreen/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "asymgreen/generators.hpp"
#include "asymgreen/series_poly.hpp"
#include "asymgreen/taylor.hpp"

namespace asymgreen {

CompiledPoly::CompiledPoly(const DiffPoly& p) {
  for (const auto& [m, c] : p.terms()) {
    Term t{to_double(c), {}};
    const auto& e = m.exponents();
    for (std::size_t j = 0; j < e.size(); ++j)
      if (e[j] != 0) t.factors.emplace_back(static_cast<int>(j), e[j]);
    terms_.push_back(std::move(t));
  }
  max_order_ = p.max_order();
}

double CompiledPoly::operator()(std::span<const double> jets) const {
  double total = 0;
  for (const auto& t : terms_) {
    double term = t.coeff;
    for (const auto& [order, power] : t.factors) {
      const double v = jets[static_cast<std::size_t>(order)];
      for (int p = 0; p < power; ++p) term *= v;
    }
    total += term;
  }
  return total;
}

namespace {

enum class PolyKind { S, Alpha };

const CompiledPoly& compiled(PolyKind kind, int n, Basis basis) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<CompiledPoly>> cache;
  const auto key = std::make_tuple(static_cast<int>(kind), n, static_cast<int>(basis));
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto made = std::make_unique<CompiledPoly>(kind == PolyKind::S ? gen_s(n, basis) : gen_alpha(n, basis));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(made));
  return *it->second;
}

const Piecewise& basis_piecewise(const PotentialSpec& spec, Basis b) {
  const auto& p = b == Basis::F ? spec.f : spec.vs;
  if (!p) throw PotentialError(std::string("potential '") + spec.name + "' has no " + basis_name(b) + "-basis function");
  return *p;
}

void check_off_jump(const PotentialSpec& spec, double z) {
  for (const auto& j : spec.jumps)
    if (z == j.location)
      throw std::invalid_argument("evaluation point z = " + format_number(z) + " lies exactly at a jump");
}

double eval_poly(const CompiledPoly& p, const Piecewise& h, double z) {
  if (p.max_order() < 0) return p(std::span<const double>());
  const auto jets = h.derivatives(z, p.max_order());
  return p(jets);
}

double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Delta terms of p at a jump of h located at z0.
void singular_terms(const DiffPoly& p, const Piecewise& h, double z0, std::map<int, double>& out) {
  const int K = std::max(p.max_order(), 0) + 1;
  const auto lo = h.derivatives(z0, K, -1), hi = h.derivatives(z0, K, +1);
  std::vector<double> J(static_cast<std::size_t>(K) + 1, 0.0);
  int mh = -1;
  for (int j = 0; j <= K; ++j) {
    const auto u = static_cast<std::size_t>(j);
    const double d = hi[u] - lo[u];
    if (std::abs(d) > kJumpRelTol * std::max({1.0, std::abs(hi[u]), std::abs(lo[u])})) {
      J[u] = d;
      if (mh < 0) mh = j;
    }
  }
  if (mh < 0) return;

  for (const auto& [m, c] : p.terms()) {
    const auto& e = m.exponents();
    int count = 0, sing = -1;
    for (std::size_t j = static_cast<std::size_t>(mh) + 1; j < e.size(); ++j) {
      count += e[j];
      if (e[j] > 0) sing = static_cast<int>(j);
    }
    if (count == 0) continue;
    if (count > 1)
      throw DistributionProductError("monomial " + m.to_string(p.basis()) + " multiplies two singular factors at z = " +
                                     format_number(z0));
    std::vector<int> ce = e;
    ce[static_cast<std::size_t>(sing)] -= 1;
    const DiffPoly g = DiffPoly::monomial(c, DiffMonomial::from_exponents(ce), p.basis());
    const int dg = g.max_order();
    // h^(sing) contains J_mm delta^(sing-1-mm) for each jump order mm
    for (int mm = mh; mm < sing; ++mm) {
      const double Jm = J[static_cast<std::size_t>(mm)];
      if (Jm == 0) continue;
      const int i = sing - 1 - mm;
      if (dg >= 0 && dg + i > mh - 1)
        throw DistributionProductError("monomial " + m.to_string(p.basis()) + " pairs delta^(" + std::to_string(i) +
                                       ") with a cofactor discontinuous at z = " + format_number(z0));
      // g delta^(i) = sum_l (-1)^l C(i,l) g^(l)(z0) delta^(i-l)
      for (int l = 0; l <= i; ++l) {
        const DiffPoly gl = dpoly_dx(g, l);
        double gv;
        if (gl.max_order() < 0) {
          gv = gl.evaluate(std::span<const double>());
        } else {
          const auto jets = h.derivatives(z0, gl.max_order(), +1);
          gv = gl.evaluate(std::span<const double>(jets));
        }
        out[i - l] += (l % 2 == 0 ? 1.0 : -1.0) * binomial(i, l) * gv * Jm;
      }
    }
  }
}

void check_basis_at_jumps(const PotentialSpec& spec, Basis b, double lo, double hi) {
  if (b != Basis::VS || spec.mode == PotentialMode::VSGiven) return;
  for (const auto& j : spec.jumps)
    if (j.location > lo && j.location < hi)
      throw PotentialError("V_S derived from a discontinuous f misses delta terms at z = " + format_number(j.location) +
                           "; use the F basis");
}

}  // namespace

Basis resolve_basis(const PotentialSpec& spec, const ExpansionOptions& opt) {
  const Basis b = opt.basis.value_or(spec.basis());
  basis_piecewise(spec, b);
  return b;
}

double eval_s(int n, double z, const PotentialSpec& spec, const ExpansionOptions& opt) {
  check_off_jump(spec, z);
  const Basis b = resolve_basis(spec, opt);
  return eval_poly(compiled(PolyKind::S, n, b), basis_piecewise(spec, b), z);
}

DistValue s_distribution(int n, const PotentialSpec& spec, double lo, double hi, const ExpansionOptions& opt) {
  const Basis b = resolve_basis(spec, opt);
  check_basis_at_jumps(spec, b, lo, hi);
  const Piecewise& h = basis_piecewise(spec, b);
  const CompiledPoly& cp = compiled(PolyKind::S, n, b);
  DistValue out;
  out.smooth = [&cp, &h](double z) { return eval_poly(cp, h, z); };
  const DiffPoly p = gen_s(n, b);
  for (const auto& j : spec.jumps) {
    if (!(j.location > lo && j.location < hi)) continue;
    std::map<int, double> terms;
    singular_terms(p, h, j.location, terms);
    for (const auto& [order, c] : terms)
      if (c != 0) out.singular.push_back({j.location, order, c});
  }
  return out;
}

double coeff_a(int n, double x, double y, const PotentialSpec& spec, const ExpansionOptions& opt) {
  if (n < 1) throw std::invalid_argument("coeff_a: order must be >= 1");
  check_off_jump(spec, x);
  check_off_jump(spec, y);
  const Basis b = resolve_basis(spec, opt);
  const Piecewise& h = basis_piecewise(spec, b);
  if (n % 2 == 0) {
    const CompiledPoly& al = compiled(PolyKind::Alpha, n, b);
    return eval_poly(al, h, x) + eval_poly(al, h, y);
  }
  if (x == y) return 0;
  const double lo = std::min(x, y), hi = std::max(x, y);
  const DistValue d = s_distribution(n + 1, spec, lo, hi, opt);
  double total = integrate(d.smooth, lo, hi, spec.breakpoints(), opt.quad).value;
  for (const auto& t : d.singular)
    if (t.order == 0) total += t.coeff;
  return (x > y ? -total : total) + 0.0;  // no negative zero
}

double ExpansionSeries::coefficient(int n) const {
  double v = a.at(static_cast<std::size_t>(n));
  for (const auto& c : corrections)
    if (c.order == n) v += c.value;
  return v;
}

OrderCap ExpansionSeries::cap(Regime r) const {
  const RegimeReport& rep = validity.get(r);
  OrderCap c = rep.cap;
  if (c.kind != OrderCap::Kind::Bounded) return c;
  for (const auto& corr : corrections) {
    if (corr.order != c.max_order + 1) continue;
    for (const auto& rc : rep.corrections)
      if (rc.order == corr.order && rc.location == corr.location) return OrderCap::bounded(c.max_order + 1);
  }
  return c;
}

ExpansionSeries make_expansion(const PotentialSpec& spec, double x, double y, int order, const ExpansionOptions& opt) {
  if (order < 0) throw std::invalid_argument("expansion order must be >= 0");
  ExpansionSeries s;
  s.x = x;
  s.y = y;
  s.order = order;
  s.basis = resolve_basis(spec, opt);
  s.validity = classify_validity(spec, x, y);
  s.forced = opt.force;
  if (opt.apply_corrections)
    for (const auto& c : s.validity.sector.corrections)
      if (c.order <= order) s.corrections.push_back(c);
  const OrderCap best = s.cap(Regime::Sector);
  if (order > 0 && !best.allows(order) && !opt.force)
    throw CapError("order " + std::to_string(order) + " exceeds the validity cap " + best.to_string() +
                   " for '" + spec.name + "'; pass force to compute anyway");
  s.a.assign(static_cast<std::size_t>(order) + 1, 0.0);
  for (int n = 1; n <= order; ++n) s.a[static_cast<std::size_t>(n)] = coeff_a(n, x, y, spec, opt);
  if (spec.has_V()) {
    s.delta_V = spec.delta_V(x, y);
    s.has_delta_V = true;
  }
  return s;
}

Regime default_regime(cplx k) { return k.imag() == 0 ? Regime::RealAxis : Regime::Sector; }

namespace {

Regime checked_regime(const ExpansionSeries& s, cplx k, std::optional<Regime> regime, bool& beyond) {
  if (k == cplx(0)) throw std::invalid_argument("k = 0 is not allowed");
  if (k.imag() < 0) throw std::invalid_argument("Im k must be >= 0");
  const Regime r = regime.value_or(default_regime(k));
  const OrderCap cap = s.cap(r);
  beyond = s.order > 0 && !cap.allows(s.order);
  if (beyond && !s.forced)
    throw CapError("order " + std::to_string(s.order) + " exceeds the " + regime_name(r) + " cap " + cap.to_string());
  return r;
}

}  // namespace

LogGResult logG_series(const ExpansionSeries& s, cplx k, std::optional<Regime> regime) {
  LogGResult out;
  out.regime = checked_regime(s, k, regime, out.beyond_cap);
  const cplx ik(-k.imag(), k.real());
  const cplx inv = 1.0 / (2.0 * ik);
  out.terms.push_back(ik * (s.x - s.y));
  cplx p = 1;
  for (int n = 1; n <= s.order; ++n) {
    p *= inv;
    out.terms.push_back(s.coefficient(n) * p);
  }
  out.log_G = 0;
  for (auto it = out.terms.rbegin(); it != out.terms.rend(); ++it) out.log_G += *it;
  out.log_GS = out.log_G - std::log(2.0 * ik);
  if (s.has_delta_V) out.log_GF = cplx(0, std::numbers::pi) - 0.5 * s.delta_V + out.log_GS;
  return out;
}

LogGResult logG_series(double x, double y, cplx k, int order, const PotentialSpec& spec, const ExpansionOptions& opt,
                       std::optional<Regime> regime) {
  return logG_series(make_expansion(spec, x, y, order, opt), k, regime);
}

std::vector<double> b_coefficients(const ExpansionSeries& s) {
  std::vector<double> a(static_cast<std::size_t>(s.order) + 1, 0.0);
  for (int n = 1; n <= s.order; ++n) a[static_cast<std::size_t>(n)] = s.coefficient(n);
  std::vector<double> b(a.size(), 0.0);
  b[0] = 1;
  for (int n = 1; n <= s.order; ++n) b[static_cast<std::size_t>(n)] = gen_b(n).evaluate(std::span<const double>(a), 1.0);
  return b;
}

cplx G_series(const ExpansionSeries& s, cplx k, std::optional<Regime> regime) {
  bool beyond = false;
  checked_regime(s, k, regime, beyond);
  const cplx ik(-k.imag(), k.real());
  const cplx inv = 1.0 / (2.0 * ik);
  const auto b = b_coefficients(s);
  cplx sum = 0, p = 1;
  for (int n = 1; n <= s.order; ++n) {
    p *= inv;
    sum += b[static_cast<std::size_t>(n)] * p;
  }
  return std::exp(ik * (s.x - s.y)) * (1.0 + sum);
}

cplx G_series(double x, double y, cplx k, int order, const PotentialSpec& spec, const ExpansionOptions& opt,
              std::optional<Regime> regime) {
  return G_series(make_expansion(spec, x, y, order, opt), k, regime);
}

const char* diagonal_policy_name(DiagonalPolicy p) {
  switch (p) {
    case DiagonalPolicy::Direct: return "direct";
    case DiagonalPolicy::TaylorX: return "taylor_x";
    case DiagonalPolicy::Diagonal: return "diagonal";
  }
  return "?";
}

double ShortTimeSeries::bracket(double t) const {
  double acc = 0;
  for (std::size_t n = g.size(); n-- > 0;) acc = acc * t + g[n];
  return acc;
}

double ShortTimeSeries::value(double t) const {
  if (!(t > 0)) throw std::invalid_argument("short-time expansion needs t > 0");
  return std::exp(-0.5 * delta_V - X2 / (4 * t)) / std::sqrt(4 * std::numbers::pi * t) * bracket(t);
}

namespace {

constexpr int kTaylorExtraDegree = 12;

// a_1..a_N as truncated series in X = x - y about the midpoint c
std::vector<Taylor<double>> a_in_X(const Piecewise& h, Basis b, double c, int N, int K) {
  std::vector<Taylor<double>> a(static_cast<std::size_t>(N) + 1, Taylor<double>(static_cast<std::size_t>(K)));
  const Taylor<double> zero(static_cast<std::size_t>(K));
  for (int n = 1; n <= N; ++n) {
    const CompiledPoly& p = compiled(n % 2 == 1 ? PolyKind::S : PolyKind::Alpha, n % 2 == 1 ? n + 1 : n, b);
    const int mo = std::max(p.max_order(), 0);
    // jets[j](h) = h^(j)(c + h)
    std::vector<Taylor<double>> jets;
    Taylor<double> base = h.jet(c, mo + K);
    for (int j = 0; j <= mo; ++j) {
      jets.push_back(base.truncated(static_cast<std::size_t>(K)));
      base = base.derivative();
    }
    const Taylor<double> v = p.evaluate<Taylor<double>>(std::span<const Taylor<double>>(jets), zero);
    Taylor<double>& an = a[static_cast<std::size_t>(n)];
    for (int l = 0; l <= K; l += 2) {
      const double half = std::pow(0.5, l);
      if (n % 2 == 1) {
        // -int_{-X/2}^{X/2} sigma_l u^l du
        if (l + 1 <= K) an[static_cast<std::size_t>(l) + 1] = -v[static_cast<std::size_t>(l)] * half / (l + 1);
      } else {
        an[static_cast<std::size_t>(l)] = 2 * v[static_cast<std::size_t>(l)] * half;
      }
    }
  }
  return a;
}

}  // namespace

ShortTimeSeries make_shorttime(const PotentialSpec& spec, double x, double y, int order, const ExpansionOptions& opt) {
  if (!spec.has_V()) throw PotentialError("short-time expansion needs V; '" + spec.name + "' gives only V_S");
  if (order < 0) throw std::invalid_argument("short-time order must be >= 0");
  check_off_jump(spec, x);
  check_off_jump(spec, y);
  const Basis b = resolve_basis(spec, opt);
  const Piecewise& h = basis_piecewise(spec, b);
  if (x != y && !opt.force) {
    const ValidityReport rep = classify_validity(spec, std::max(x, y), std::min(x, y));
    if (order > 0 && !rep.sector.cap.allows(order))
      throw CapError("short-time order " + std::to_string(order) + " exceeds the sector cap " +
                     rep.sector.cap.to_string());
  }

  ShortTimeSeries s;
  s.x = x;
  s.y = y;
  s.order = order;
  const double X = x - y;
  s.X2 = X * X;
  s.delta_V = spec.delta_V(x, y);
  s.g.assign(static_cast<std::size_t>(order) + 1, 0.0);
  s.g[0] = 1;
  if (order == 0) return s;

  const double c = 0.5 * (x + y);
  bool split = false;
  for (double bp : spec.breakpoints()) split = split || (bp >= std::min(x, y) && bp <= std::max(x, y));
  if (std::abs(X) < opt.diag_threshold_rel * std::max(1.0, std::abs(x))) {
    s.policy = DiagonalPolicy::Diagonal;
    std::vector<double> a(2 * static_cast<std::size_t>(order) + 1, 0.0);
    for (int j = 2; j <= 2 * order; j += 2)
      a[static_cast<std::size_t>(j)] = 2 * eval_poly(compiled(PolyKind::Alpha, j, b), h, c);
    for (int n = 1; n <= order; ++n)
      s.g[static_cast<std::size_t>(n)] = gen_b(2 * n).evaluate(std::span<const double>(a), 0.0) /
                                         to_double(gen_b_g(n).diagonal_divisor);
  } else if (std::abs(X) < opt.near_diag && !split) {
    s.policy = DiagonalPolicy::TaylorX;
    const int K = 2 * order - 1 + kTaylorExtraDegree;
    const auto a = a_in_X(h, b, c, order, K);
    const Taylor<double> zero(static_cast<std::size_t>(K));
    auto from_q = [&](const Rational& q) { return zero + to_double(q); };
    auto no_x = [](int) -> Taylor<double> { throw std::logic_error("b_m carries no X powers"); };
    std::vector<Taylor<double>> bm(static_cast<std::size_t>(order) + 1);
    for (int m = 1; m <= order; ++m)
      bm[static_cast<std::size_t>(m)] =
          gen_b(m).evaluate_with<Taylor<double>>(std::span<const Taylor<double>>(a), no_x, from_q);
    for (int n = 1; n <= order; ++n) {
      // coefficient of X^p in g_n, p >= 0; negative powers cancel identically
      double acc = 0, Xp = 1;
      for (int p = 0; p + 2 * n - 1 <= K; ++p) {
        double cp = 0;
        for (int m = 1; m <= n; ++m) {
          const int idx = p + 2 * n - m;
          if (idx <= K) cp += to_double(g_weight(n, m)) * bm[static_cast<std::size_t>(m)][static_cast<std::size_t>(idx)];
        }
        acc += cp * Xp;
        Xp *= X;
      }
      s.g[static_cast<std::size_t>(n)] = acc;
    }
  } else {
    s.policy = DiagonalPolicy::Direct;
    std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0);
    for (int n = 1; n <= order; ++n) a[static_cast<std::size_t>(n)] = coeff_a(n, x, y, spec, opt);
    std::vector<double> bm(a.size(), 0.0);
    for (int m = 1; m <= order; ++m) bm[static_cast<std::size_t>(m)] = gen_b(m).evaluate(std::span<const double>(a), X);
    for (int n = 1; n <= order; ++n) {
      double acc = 0;
      for (int m = 1; m <= n; ++m)
        acc += to_double(g_weight(n, m)) * bm[static_cast<std::size_t>(m)] * std::pow(X, m - 2 * n);
      s.g[static_cast<std::size_t>(n)] = acc;
    }
  }
  return s;
}

double shorttime_GF(double x, double y, double t, int order, const PotentialSpec& spec, const ExpansionOptions& opt) {
  return make_shorttime(spec, x, y, order, opt).value(t);
}

}  // namespace asymgreen
