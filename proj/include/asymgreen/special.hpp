#pragma once

#include <complex>
#include <stdexcept>

namespace asymgreen {

// Argument outside the range where a closed form or series is trusted.
class UnsupportedDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace special {

using cplx = std::complex<double>;

// Largest max|term| / |sum| a series may reach before it is rejected.
inline constexpr double kCancellationBudget = 1e7;

// log Gamma on some branch (only exp of it is meaningful); Lanczos g = 7 with
// reflection for Re z < 1/2.  Throws std::domain_error at the poles.
cplx lgamma(cplx z);
cplx gamma(cplx z);
cplx rgamma(cplx z);  // 1/Gamma, zero at the poles

// Confluent hypergeometric M(a, b; z) = sum (a)_n / (b)_n z^n / n!
cplx kummer_m(cplx a, cplx b, cplx z);
// Gauss 2F1(a, b; c; z), |z| < 1
cplx hyp2f1(cplx a, cplx b, cplx c, cplx z);
// Bessel J_nu(z) with the principal branch of (z/2)^nu
cplx bessel_j(cplx nu, cplx z);

// sqrt(w) with Im >= 0; on the real-positive cut the sign follows Re(ref).
cplx upper_sqrt(cplx w, cplx ref);

}  // namespace special
}  // namespace asymgreen
