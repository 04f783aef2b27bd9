#include "asymgreen/rat_poly.hpp"

#include <algorithm>

namespace asymgreen {

RatPoly::RatPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

RatPoly::RatPoly(const Rational& c) : c_{c} { trim(); }

RatPoly RatPoly::z() { return RatPoly(std::vector<Rational>{Rational(0), Rational(1)}); }

void RatPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

RatPoly RatPoly::operator+(const RatPoly& o) const {
  std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return RatPoly(std::move(r));
}

RatPoly RatPoly::operator-() const {
  std::vector<Rational> r = c_;
  for (auto& v : r) v = -v;
  return RatPoly(std::move(r));
}

RatPoly RatPoly::operator-(const RatPoly& o) const { return *this + (-o); }

RatPoly RatPoly::operator*(const RatPoly& o) const {
  if (c_.empty() || o.c_.empty()) return RatPoly();
  std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return RatPoly(std::move(r));
}

RatPoly RatPoly::derivative() const {
  std::vector<Rational> r;
  for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * static_cast<long>(i));
  return RatPoly(std::move(r));
}

RatPoly RatPoly::integral() const {
  std::vector<Rational> r{Rational(0)};
  for (std::size_t i = 0; i < c_.size(); ++i) r.push_back(c_[i] / static_cast<long>(i + 1));
  return RatPoly(std::move(r));
}

RatPoly RatPoly::compose(const RatPoly& inner) const {
  RatPoly acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + RatPoly(*it);
  return acc;
}

Rational RatPoly::operator()(const Rational& z) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double RatPoly::operator()(double z) const {
  double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + it->get_d();
  return acc;
}

std::string RatPoly::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    const bool neg = c_[i] < 0;
    if (!out.empty())
      out += neg ? " - " : " + ";
    else if (neg)
      out += "-";
    const Rational mag = neg ? Rational(-c_[i]) : c_[i];
    if (i == 0) {
      out += mag.get_str();
      continue;
    }
    if (mag != 1) out += mag.get_str() + "*";
    out += i == 1 ? "z" : "z^" + std::to_string(i);
  }
  return out;
}

}  // namespace asymgreen
