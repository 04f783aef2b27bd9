#include "asymgreen/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace asymgreen::special {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::array<double, 9> kLanczos{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                         771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                         -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
constexpr int kMaxTerms = 20000;

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0 && z.real() <= 0 && std::floor(z.real()) == z.real();
}

// sum_n t_n with t_{n+1} = t_n * ratio(n)
template <class Ratio>
cplx power_series(Ratio ratio, const char* what) {
  cplx term = 1, sum = 1;
  double biggest = 1;
  for (int n = 0; n < kMaxTerms; ++n) {
    term *= ratio(n);
    sum += term;
    biggest = std::max(biggest, std::abs(term));
    if (term == cplx(0)) return sum;
    if (std::abs(term) < 1e-17 * std::abs(sum) && std::abs(ratio(n + 1)) < 0.5) {
      if (biggest > kCancellationBudget * std::abs(sum))
        throw UnsupportedDomainError(std::string(what) + ": cancellation exceeds the series budget");
      return sum;
    }
  }
  throw UnsupportedDomainError(std::string(what) + ": series did not converge within the term budget");
}

}  // namespace

cplx lgamma(cplx z) {
  if (is_nonpositive_integer(z)) throw std::domain_error("Gamma pole at " + std::to_string(z.real()));
  if (z.real() < 0.5) return std::log(kPi) - std::log(std::sin(kPi * z)) - lgamma(1.0 - z);
  z -= 1.0;
  cplx x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + 7.5;
  return 0.5 * std::log(2 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx gamma(cplx z) { return std::exp(lgamma(z)); }

cplx rgamma(cplx z) {
  if (is_nonpositive_integer(z)) return 0;
  return std::exp(-lgamma(z));
}

cplx kummer_m(cplx a, cplx b, cplx z) {
  if (is_nonpositive_integer(b)) throw std::domain_error("kummer_m: b is a non-positive integer");
  return power_series([&](int n) { return (a + double(n)) / ((b + double(n)) * double(n + 1)) * z; }, "kummer_m");
}

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z) {
  if (std::abs(z) >= 1) throw UnsupportedDomainError("hyp2f1: series needs |z| < 1");
  if (is_nonpositive_integer(c)) throw std::domain_error("hyp2f1: c is a non-positive integer");
  return power_series(
      [&](int n) { return (a + double(n)) * (b + double(n)) / ((c + double(n)) * double(n + 1)) * z; }, "hyp2f1");
}

cplx bessel_j(cplx nu, cplx z) {
  if (z == cplx(0)) return nu == cplx(0) ? cplx(1) : cplx(0);
  const cplx q = -0.25 * z * z;
  const cplx s = power_series([&](int m) { return q / (double(m + 1) * (nu + double(m + 1))); }, "bessel_j");
  return std::exp(nu * std::log(0.5 * z) - lgamma(nu + 1.0)) * s;
}

cplx upper_sqrt(cplx w, cplx ref) {
  cplx r = std::sqrt(w);
  if (r.imag() < 0 || (r.imag() == 0 && r.real() * ref.real() < 0)) r = -r;
  return r;
}

}  // namespace asymgreen::special
