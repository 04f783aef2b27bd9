#pragma once

#include <string>
#include <vector>

#include "asymgreen/rational.hpp"

namespace asymgreen {

// Univariate polynomial in z with exact rational coefficients; used to carry
// polynomial potentials through the generators without rounding.
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rational> coeffs);
  RatPoly(const Rational& c);  // NOLINT: constants promote implicitly
  RatPoly(int c) : RatPoly(Rational(c)) {}  // NOLINT
  static RatPoly z();

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }

  RatPoly operator+(const RatPoly& o) const;
  RatPoly operator-(const RatPoly& o) const;
  RatPoly operator-() const;
  RatPoly operator*(const RatPoly& o) const;
  bool operator==(const RatPoly& o) const { return c_ == o.c_; }

  RatPoly derivative() const;
  // antiderivative vanishing at z = 0
  RatPoly integral() const;
  // p(inner(z))
  RatPoly compose(const RatPoly& inner) const;
  Rational operator()(const Rational& z) const;
  double operator()(double z) const;

  std::string to_string() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

}  // namespace asymgreen
