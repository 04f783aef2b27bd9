#include "asymgreen/exact.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace asymgreen {

namespace {

using special::bessel_j;
using special::gamma;
using special::hyp2f1;
using special::kummer_m;
using special::upper_sqrt;

constexpr double kPi = std::numbers::pi;
const cplx I(0, 1);

// a + b, refused when the sum loses more digits than the series budget allows
cplx sum_checked(cplx a, cplx b, const char* what) {
  const cplx s = a + b;
  if (std::max(std::abs(a), std::abs(b)) > special::kCancellationBudget * std::abs(s))
    throw UnsupportedDomainError(std::string(what) + ": cancellation between solutions exceeds the budget");
  return s;
}

// chi_{+-}(x, k) = i e^{x/2}/sqrt2 [J_{nu+-}(-i e^x/2) + i J_{-nu-+}(-i e^x/2)]
cplx chi(int sign, double x, cplx k) {
  const cplx nu_p = 0.5 + I * k, nu_m = 0.5 - I * k;
  const cplx z = -I * std::exp(x) / 2.0;
  const cplx a = sign > 0 ? nu_p : nu_m, b = sign > 0 ? nu_m : nu_p;
  return I * std::exp(x / 2) / std::sqrt(2.0) * sum_checked(bessel_j(a, z), I * bessel_j(-b, z), "chi");
}

cplx ex2_psi(int sign, double x, cplx k) {
  const cplx a = -k * k / 4.0;
  return std::exp(-x * x / 2) * sum_checked(gamma(a) * kummer_m(a, 0.5, x * x),
                                            -double(sign) * 2 * x * gamma(0.5 + a) * kummer_m(0.5 + a, 1.5, x * x),
                                            "ex2");
}

cplx ex4_eta(int sign, double x, cplx alpha, cplx beta) {
  const double s = std::sinh(x);
  const cplx c = gamma(0.5 + alpha) * gamma(1.0 - beta) / (gamma(alpha) * gamma(0.5 - beta));
  return sum_checked(hyp2f1(alpha, beta, 0.5, -s * s),
                     -double(sign) * 2.0 * c * s * hyp2f1(alpha + 0.5, beta + 0.5, 1.5, -s * s), "ex4");
}

// zeta_sign(x) and its x-derivative; dM(a, b, z)/dz = (a/b) M(a+1, b+1, z)
std::pair<cplx, cplx> ex7_zeta(int sign, double x, cplx k) {
  const double sg = sign, u = 1 + sg * x;
  const cplx q = I / (32.0 * k);
  const cplx z = -2.0 * I * k * u, dz = -2.0 * I * k * sg;
  const double r = std::sqrt(u) / 2, dr = sg / (4 * std::sqrt(u));
  // c (M(a1, 1/2, z) - sign r M(a2, 3/2, z))
  auto pair_term = [&](cplx c, cplx a1, cplx a2) {
    const cplx m1 = kummer_m(a1, 0.5, z), m2 = kummer_m(a2, 1.5, z);
    const cplx dm1 = 2.0 * a1 * kummer_m(a1 + 1.0, 1.5, z) * dz;
    const cplx dm2 = a2 / 1.5 * kummer_m(a2 + 1.0, 2.5, z) * dz;
    return std::pair{c * (m1 - sg * r * m2), c * (dm1 - sg * (dr * m2 + r * dm2))};
  };
  const auto [f1, df1] = pair_term(std::sqrt(q) * gamma(q), q, q + 1.0);
  const auto [f2, df2] = pair_term(sg * gamma(q + 0.5), q + 0.5, q + 0.5);
  const cplx e = std::exp(I * k * u);
  const cplx f = sum_checked(f1, f2, "ex7");
  return {e * f, e * (I * k * sg * f + df1 + df2)};
}

void require(bool ok, std::string_view example, const char* what) {
  if (!ok) throw UnsupportedDomainError(std::string(example) + ": closed form covers " + what);
}

}  // namespace

bool has_exact_green(std::string_view e) {
  return e == "ex1" || e == "ex2" || e == "ex3" || e == "ex4" || e == "ex5" || e == "ex6" || e == "ex7";
}

bool exact_is_elementary(std::string_view e, double x, double y) {
  return e == "ex1" || (e == "ex5" && y < 0 && 0 < x);
}

cplx exact_green(std::string_view e, double x, double y, cplx k) {
  if (k == cplx(0)) throw std::invalid_argument("k = 0 is not allowed");
  if (!(x >= y)) throw std::invalid_argument("exact_green requires x >= y");
  const double X = x - y;
  if (e == "ex1") {
    const cplx kap = upper_sqrt(k * k - 1.0, k);
    return k / kap * std::exp(I * kap * X);
  }
  if (e == "ex2") {
    const cplx a = -k * k / 4.0;
    return -I * k / (2.0 * gamma(a) * gamma(0.5 + a)) * ex2_psi(+1, x, k) * ex2_psi(-1, y, k);
  }
  if (e == "ex3") {
    return -I * kPi / (2.0 * std::cos(I * kPi * k)) * sum_checked(chi(+1, x, k), std::exp(kPi * k) * chi(-1, x, k), "ex3") *
           chi(-1, y, k);
  }
  if (e == "ex4") {
    require(std::abs(std::sinh(x)) < 1 && std::abs(std::sinh(y)) < 1, e, "|sinh x|, |sinh y| < 1");
    const cplx r = upper_sqrt(k * k - 1.0, k);
    const cplx alpha = 0.5 * (-1.0 - I * r), beta = 0.5 * (-1.0 + I * r);
    const cplx pre = k / (2 * kPi * r) * gamma(alpha) * gamma(0.5 - alpha) * gamma(beta) * gamma(0.5 - beta) *
                     std::cos(alpha * kPi) * std::sin(beta * kPi) /
                     (gamma(alpha - beta) * gamma(beta - alpha) * std::sin((beta - alpha) * kPi));
    return pre * ex4_eta(+1, x, alpha, beta) * ex4_eta(-1, y, alpha, beta) / (std::cosh(x) * std::cosh(y));
  }
  if (e == "ex5") {
    require(y < 0 && 0 < x, e, "y < 0 < x");
    const cplx kap = upper_sqrt(k * k - 1.0, k);
    return (I + kap) / k * std::exp(I * kap * X);
  }
  if (e == "ex6") {
    const cplx K = upper_sqrt(k * k - 0.25, k);
    const cplx nu_p = 0.5 + I * k, nu_m = 0.5 - I * k;
    const cplx Jm = bessel_j(nu_m, -I / 2.0), Jp = bessel_j(-nu_p, -I / 2.0);
    if (y < 0 && 0 < x) {
      const cplx den = sum_checked((K - I * nu_m) * Jm, (I * K + nu_p) * Jp, "ex6");
      return -2.0 * std::sqrt(2.0) * I * k * std::exp(I * K * x) * chi(-1, y, k) / den;
    }
    require(0 < y, e, "y < 0 < x and 0 < y < x");
    const cplx Ap = sum_checked((I + nu_m / K) * Jm, -(1.0 - I * nu_p / K) * Jp, "ex6");
    const cplx Am = (I - nu_m / K) * Jm - (1.0 + I * nu_p / K) * Jp;
    return k / K * (std::exp(-I * K * y) + Am / Ap * std::exp(I * K * y)) * std::exp(I * K * x);
  }
  if (e == "ex7") {
    require(y < 0 && 0 < x, e, "y < 0 < x");
    const auto [zp, dzp] = ex7_zeta(+1, 0, k);
    const auto [zm, dzm] = ex7_zeta(-1, 0, k);
    return 2.0 * I * k * ex7_zeta(+1, x, k).first * ex7_zeta(-1, y, k).first / sum_checked(dzp * zm, -zp * dzm, "ex7");
  }
  throw UnsupportedDomainError("no closed form implemented for '" + std::string(e) + "'");
}

double exact_GF_time(std::string_view e, double x, double y, double t) {
  if (!(t > 0)) throw std::invalid_argument("exact_GF_time needs t > 0");
  if (e == "ex1") {
    const double X = x - y;
    return std::exp(-X - X * X / (4 * t) - t) / std::sqrt(4 * kPi * t);
  }
  if (e == "ex2") {
    const double d = 1 - std::exp(-4 * t);
    const double m = x - y * std::exp(-2 * t);
    return std::exp(-m * m / d) / std::sqrt(kPi * d);
  }
  throw UnsupportedDomainError("exact_GF_time covers ex1 and ex2 only");
}

}  // namespace asymgreen
