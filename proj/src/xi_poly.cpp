#include "asymgreen/xi_poly.hpp"

namespace asymgreen {

XiPoly::XiPoly(std::vector<DiffPoly> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void XiPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

DiffPoly XiPoly::coeff(int j) const {
  if (j < 0 || j > degree()) return DiffPoly(coeffs_.empty() ? Basis::F : coeffs_.front().basis());
  return coeffs_[static_cast<std::size_t>(j)];
}

DiffPoly XiPoly::evaluate_at(const Rational& xi) const {
  DiffPoly r(coeffs_.empty() ? Basis::F : coeffs_.front().basis());
  for (int j = degree(); j >= 0; --j) r = r * xi + coeffs_[static_cast<std::size_t>(j)];
  return r;
}

std::string XiPoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (int j = 0; j <= degree(); ++j) {
    const DiffPoly& c = coeffs_[static_cast<std::size_t>(j)];
    if (c.is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + c.to_string() + ")";
    if (j == 1) out += "*xi";
    if (j > 1) out += "*xi^" + std::to_string(j);
  }
  return out;
}

}  // namespace asymgreen
