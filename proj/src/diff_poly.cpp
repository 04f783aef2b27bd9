#include "asymgreen/diff_poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace asymgreen {

const char* basis_name(Basis b) { return b == Basis::F ? "f" : "vs"; }

char basis_symbol(Basis b) { return b == Basis::F ? 'f' : 'v'; }

DiffMonomial DiffMonomial::jet(int order, int power) {
  if (order < 0 || power < 0) throw std::invalid_argument("negative jet order or power");
  DiffMonomial m;
  if (power == 0) return m;
  m.exps_.assign(static_cast<std::size_t>(order) + 1, 0);
  m.exps_[static_cast<std::size_t>(order)] = power;
  return m;
}

DiffMonomial DiffMonomial::from_exponents(std::vector<int> exps) {
  for (int e : exps)
    if (e < 0) throw std::invalid_argument("negative exponent");
  DiffMonomial m;
  m.exps_ = std::move(exps);
  m.trim();
  return m;
}

void DiffMonomial::trim() {
  while (!exps_.empty() && exps_.back() == 0) exps_.pop_back();
}

int DiffMonomial::exponent(int order) const {
  if (order < 0 || order >= static_cast<int>(exps_.size())) return 0;
  return exps_[static_cast<std::size_t>(order)];
}

int DiffMonomial::degree() const {
  int d = 0;
  for (int e : exps_) d += e;
  return d;
}

int DiffMonomial::weight() const {
  int w = 0;
  for (std::size_t j = 0; j < exps_.size(); ++j) w += static_cast<int>(j + 1) * exps_[j];
  return w;
}

DiffMonomial DiffMonomial::operator*(const DiffMonomial& o) const {
  DiffMonomial r;
  r.exps_.assign(std::max(exps_.size(), o.exps_.size()), 0);
  for (std::size_t j = 0; j < exps_.size(); ++j) r.exps_[j] += exps_[j];
  for (std::size_t j = 0; j < o.exps_.size(); ++j) r.exps_[j] += o.exps_[j];
  return r;
}

std::string DiffMonomial::to_string(Basis b) const {
  std::string out;
  for (std::size_t j = 0; j < exps_.size(); ++j) {
    if (exps_[j] == 0) continue;
    if (!out.empty()) out += '*';
    out += basis_symbol(b);
    out += std::to_string(j);
    if (exps_[j] > 1) out += '^' + std::to_string(exps_[j]);
  }
  return out.empty() ? "1" : out;
}

bool CanonicalOrder::operator()(const DiffMonomial& a, const DiffMonomial& b) const {
  const int wa = a.weight(), wb = b.weight();
  if (wa != wb) return wa < wb;
  const int top = std::max(a.max_order(), b.max_order());
  for (int j = top; j >= 0; --j) {
    const int ea = a.exponent(j), eb = b.exponent(j);
    if (ea != eb) return ea > eb;
  }
  return false;
}

DiffPoly DiffPoly::constant(const Rational& c, Basis b) {
  DiffPoly p(b);
  p.add_term(DiffMonomial(), c);
  return p;
}

DiffPoly DiffPoly::jet(int order, Basis b, int power) {
  DiffPoly p(b);
  p.add_term(DiffMonomial::jet(order, power), Rational(1));
  return p;
}

DiffPoly DiffPoly::monomial(const Rational& c, const DiffMonomial& m, Basis b) {
  DiffPoly p(b);
  p.add_term(m, c);
  return p;
}

Rational DiffPoly::coefficient(const DiffMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

int DiffPoly::max_order() const {
  int m = -1;
  for (const auto& [mono, c] : terms_) m = std::max(m, mono.max_order());
  return m;
}

void DiffPoly::add_term(const DiffMonomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

static void check_basis(const DiffPoly& a, const DiffPoly& b) {
  if (a.basis() != b.basis()) throw std::invalid_argument("DiffPoly basis mismatch");
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
  check_basis(*this, o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
  check_basis(*this, o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

DiffPoly& DiffPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coef] : terms_) coef *= c;
  return *this;
}

DiffPoly DiffPoly::operator+(const DiffPoly& o) const {
  DiffPoly r = *this;
  r += o;
  return r;
}

DiffPoly DiffPoly::operator-(const DiffPoly& o) const {
  DiffPoly r = *this;
  r -= o;
  return r;
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

DiffPoly DiffPoly::operator*(const DiffPoly& o) const {
  check_basis(*this, o);
  DiffPoly r(basis_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

DiffPoly DiffPoly::operator*(const Rational& c) const {
  DiffPoly r = *this;
  r *= c;
  return r;
}

DiffPoly DiffPoly::pow(int e) const {
  if (e < 0) throw std::invalid_argument("negative DiffPoly power");
  DiffPoly r = constant(Rational(1), basis_);
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

std::string DiffPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool neg = c < 0;
    const Rational mag = neg ? Rational(-c) : c;
    if (first)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    first = false;
    if (m.is_one()) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str() + "*";
      out += m.to_string(basis_);
    }
  }
  return out;
}

double DiffPoly::evaluate(std::span<const double> jets) const {
  return evaluate<double>(jets, [](const Rational& q) { return q.get_d(); });
}

Rational DiffPoly::evaluate(std::span<const Rational> jets) const {
  return evaluate<Rational>(jets, [](const Rational& q) { return q; });
}

DiffPoly dpoly_dx(const DiffPoly& p) {
  DiffPoly r(p.basis());
  for (const auto& [m, c] : p.terms()) {
    const auto& e = m.exponents();
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      std::vector<int> ne = e;
      ne[j] -= 1;
      if (ne.size() < j + 2) ne.resize(j + 2, 0);
      ne[j + 1] += 1;
      r.add_term(DiffMonomial::from_exponents(std::move(ne)), c * e[j]);
    }
  }
  return r;
}

DiffPoly dpoly_dx(const DiffPoly& p, int times) {
  DiffPoly r = p;
  for (int i = 0; i < times; ++i) r = dpoly_dx(r);
  return r;
}

DiffPoly substitute(const DiffPoly& p, const std::vector<DiffPoly>& images) {
  if (p.max_order() >= static_cast<int>(images.size()))
    throw std::invalid_argument("substitute: not enough images");
  const Basis out_basis = images.empty() ? p.basis() : images.front().basis();
  DiffPoly r(out_basis);
  for (const auto& [m, c] : p.terms()) {
    DiffPoly term = DiffPoly::constant(c, out_basis);
    const auto& e = m.exponents();
    for (std::size_t j = 0; j < e.size(); ++j)
      if (e[j] > 0) term = term * images[j].pow(e[j]);
    r += term;
  }
  return r;
}

DiffPoly vs_to_f(const DiffPoly& p, const Rational& e0) {
  if (p.basis() != Basis::VS) throw std::invalid_argument("vs_to_f expects a VS-basis polynomial");
  std::vector<DiffPoly> images;
  DiffPoly vs = DiffPoly::jet(0, Basis::F, 2) + DiffPoly::jet(1, Basis::F) +
                DiffPoly::constant(e0, Basis::F);
  for (int j = 0; j <= p.max_order(); ++j) {
    images.push_back(vs);
    vs = dpoly_dx(vs);
  }
  if (images.empty()) images.push_back(vs);
  return substitute(p, images);
}

}  // namespace asymgreen
