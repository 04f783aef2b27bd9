#pragma once

#include <string>
#include <vector>

#include "asymgreen/diff_poly.hpp"

namespace asymgreen {

// Polynomial in xi whose coefficients are differential polynomials.
class XiPoly {
 public:
  XiPoly() = default;
  explicit XiPoly(std::vector<DiffPoly> coeffs);
  static XiPoly constant(const DiffPoly& p) { return XiPoly({p}); }

  // -1 for the zero polynomial
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<DiffPoly>& coeffs() const { return coeffs_; }
  // coefficient of xi^j; zero (F basis) outside the stored range
  DiffPoly coeff(int j) const;

  DiffPoly evaluate_at(const Rational& xi) const;

  bool operator==(const XiPoly& o) const { return coeffs_ == o.coeffs_; }
  std::string to_string() const;

 private:
  void trim();
  std::vector<DiffPoly> coeffs_;
};

}  // namespace asymgreen
