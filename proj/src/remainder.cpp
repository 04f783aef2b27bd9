#include "asymgreen/remainder.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>

#include "asymgreen/exact.hpp"
#include "asymgreen/parallel.hpp"

namespace asymgreen {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ASYMGREEN_THREADS")) {
    int n = 0;
    const std::string_view s(env);
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec == std::errc() && p == s.data() + s.size() && n > 0) return n;
  }
  return omp_get_max_threads();
}

namespace {

double parse_double(std::string_view s, std::string_view what) {
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

}  // namespace

Ray Ray::parse(std::string_view text) {
  if (text == "real") return {Kind::Real, 0};
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const std::string_view head = text.substr(0, colon), tail = text.substr(colon + 1);
    if (head == "sector") {
      const double th = parse_double(tail, "sector angle");
      if (!(th > 0 && th < std::numbers::pi)) throw std::invalid_argument("sector angle must lie in (0, pi)");
      return {Kind::Sector, th};
    }
    if (head == "imline") {
      const double b = parse_double(tail, "imline offset");
      if (!(b > 0)) throw std::invalid_argument("imline offset must be positive");
      return {Kind::ImLine, b};
    }
  }
  throw std::invalid_argument("ray must be real, sector:<theta> or imline:<b>, got '" + std::string(text) + "'");
}

std::string Ray::to_string() const {
  switch (kind) {
    case Kind::Real: return "real";
    case Kind::Sector: return "sector:" + format_number(param);
    case Kind::ImLine: return "imline:" + format_number(param);
  }
  return "?";
}

Regime Ray::regime() const {
  switch (kind) {
    case Kind::Real: return Regime::RealAxis;
    case Kind::Sector: return Regime::Sector;
    case Kind::ImLine: return Regime::HalfPlane;
  }
  return Regime::Sector;
}

cplx Ray::at(double modulus) const {
  switch (kind) {
    case Kind::Real: return {modulus, 0};
    case Kind::Sector: return std::polar(modulus, param);
    case Kind::ImLine:
      if (!(modulus > param)) throw std::invalid_argument("|k| must exceed the imline offset");
      return {std::sqrt(modulus * modulus - param * param), param};
  }
  return {};
}

std::vector<double> linear_moduli(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0) || !(hi >= lo)) throw std::invalid_argument("need 0 < kmin <= kmax and nk >= 1");
  if (n == 1) return {hi};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return out;
}

const char* reference_name(Reference r) {
  switch (r) {
    case Reference::Auto: return "auto";
    case Reference::Oracle: return "oracle";
    case Reference::Exact: return "exact";
  }
  return "?";
}

Reference parse_reference(std::string_view t) {
  if (t == "auto") return Reference::Auto;
  if (t == "oracle" || t == "riccati") return Reference::Oracle;
  if (t == "exact") return Reference::Exact;
  throw std::invalid_argument("reference must be auto, oracle or exact");
}

const char* trend_name(Trend t) {
  switch (t) {
    case Trend::Vanishing: return "vanishing";
    case Trend::FiniteLimit: return "finite-limit";
    case Trend::Divergent: return "divergent";
    case Trend::Undetermined: return "undetermined";
  }
  return "?";
}

Trend classify_trend(const std::vector<double>& moduli, const std::vector<double>& values, double* slope) {
  const std::size_t n = std::min(moduli.size(), values.size());
  if (n < 4) return Trend::Undetermined;
  // upper half of the |k| range, cut into blocks; the block maxima trace the envelope
  const double lo = moduli[0] + 0.5 * (moduli[n - 1] - moduli[0]);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < n; ++i)
    if (moduli[i] >= lo && std::isfinite(values[i])) pts.emplace_back(moduli[i], values[i]);
  if (pts.size() < 4) return Trend::Undetermined;
  const std::size_t blocks = std::min<std::size_t>(6, pts.size() / 2);
  std::vector<double> lx, ly;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t i0 = b * pts.size() / blocks, i1 = (b + 1) * pts.size() / blocks;
    double m = 0, kk = 0;
    for (std::size_t i = i0; i < i1; ++i) {
      m = std::max(m, pts[i].second);
      kk += pts[i].first;
    }
    if (m <= 0) return Trend::Vanishing;  // exact zeros
    lx.push_back(std::log(kk / double(i1 - i0)));
    ly.push_back(std::log(m));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= double(lx.size()), my /= double(lx.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
  if (sxx == 0) return Trend::Undetermined;
  const double s = sxy / sxx;
  if (slope) *slope = s;
  if (s < -0.5) return Trend::Vanishing;
  if (s > 0.5) return Trend::Divergent;
  return Trend::FiniteLimit;
}

RemainderSample remainder_sample(const ExpansionSeries& s, const PotentialSpec& spec, cplx k, Regime regime,
                                 const RemainderOptions& opt) {
  RemainderSample out;
  out.k = k;
  try {
    Reference ref = opt.reference;
    if (ref == Reference::Auto)
      ref = !opt.example.empty() && exact_is_elementary(opt.example, s.x, s.y) ? Reference::Exact : Reference::Oracle;
    if (ref == Reference::Exact && opt.example.empty()) throw UnsupportedDomainError("no closed form for a non-builtin potential");
    out.used = ref;
    const cplx logG = ref == Reference::Exact ? std::log(exact_green(opt.example, s.x, s.y, k))
                                              : oracle_logG(s.x, s.y, k, spec, opt.oracle).logG;
    const LogGResult series = logG_series(s, k, regime);
    // wrap the difference, not the two logs, onto the principal branch
    out.delta = std::log(std::exp(logG - series.log_G));
    out.abs_kN_delta = std::pow(std::abs(k), s.order) * std::abs(out.delta);
    out.ok = std::isfinite(out.abs_kN_delta);
    if (!out.ok) out.error = "non-finite remainder";
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
  }
  return out;
}

namespace {

template <class Loop>
RemainderReport build_report(const PotentialSpec& spec, double x, double y, int N, const Ray& ray,
                             const std::vector<double>& moduli, const RemainderOptions& opt, const Loop& loop) {
  for (std::size_t i = 1; i < moduli.size(); ++i)
    if (!(moduli[i] > moduli[i - 1])) throw std::invalid_argument("|k| samples must be strictly increasing");
  RemainderReport r;
  r.N = N;
  r.x = x;
  r.y = y;
  r.ray = ray;
  const ExpansionSeries s = make_expansion(spec, x, y, N, opt.expansion);
  r.beyond_cap = !s.cap(ray.regime()).allows(N);
  r.corrections = s.corrections;
  r.samples.resize(moduli.size());
  const Regime regime = ray.regime();
  loop(moduli.size(), [&](std::size_t i) { r.samples[i] = remainder_sample(s, spec, ray.at(moduli[i]), regime, opt); });

  std::vector<double> ks, vs;
  for (const auto& smp : r.samples)
    if (smp.ok) ks.push_back(std::abs(smp.k)), vs.push_back(smp.abs_kN_delta);
  if (ks.empty()) throw OracleError("no remainder sample succeeded: " + r.samples.front().error);
  r.trend = classify_trend(ks, vs, &r.slope);
  const std::size_t m = std::min<std::size_t>(3, vs.size());
  for (std::size_t i = vs.size() - m; i < vs.size(); ++i) r.limit += vs[i] / double(m);
  return r;
}

}  // namespace

RemainderReport remainder_report(const PotentialSpec& spec, double x, double y, int N, const Ray& ray,
                                 const std::vector<double>& moduli, const RemainderOptions& opt) {
  return build_report(spec, x, y, N, ray, moduli, opt,
                      [&](std::size_t n, const auto& fn) { parallel_for(n, opt.threads, fn); });
}

RemainderReport remainder_report_serial(const PotentialSpec& spec, double x, double y, int N, const Ray& ray,
                                        const std::vector<double>& moduli, const RemainderOptions& opt) {
  return build_report(spec, x, y, N, ray, moduli, opt, [](std::size_t n, const auto& fn) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
  });
}

std::string remainder_csv(const RemainderReport& r) {
  std::string out = "k_re,k_im,abs_kN_DeltaN,re_Delta,im_Delta\n";
  char buf[160];
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& s : r.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.k.real(), s.k.imag(),
                  s.ok ? s.abs_kN_delta : nan, s.ok ? s.delta.real() : nan, s.ok ? s.delta.imag() : nan);
    out += buf;
  }
  return out;
}

}  // namespace asymgreen
