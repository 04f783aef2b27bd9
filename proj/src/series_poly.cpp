#include "asymgreen/series_poly.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <stdexcept>

namespace asymgreen {

AbstractSeriesPoly AbstractSeriesPoly::symbol(int index) {
  if (index < 1) throw std::invalid_argument("symbol index must be >= 1");
  AbstractSeriesPoly p;
  p.add_term({index}, 0, Rational(1));
  return p;
}

AbstractSeriesPoly AbstractSeriesPoly::constant(const Rational& c) {
  AbstractSeriesPoly p;
  p.add_term({}, 0, c);
  return p;
}

void AbstractSeriesPoly::add_term(std::vector<int> indices, int x_power, const Rational& c) {
  if (c == 0) return;
  std::sort(indices.begin(), indices.end());
  auto [it, inserted] = terms_.try_emplace(Key{std::move(indices), x_power}, c);
  if (inserted) return;
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

AbstractSeriesPoly& AbstractSeriesPoly::operator+=(const AbstractSeriesPoly& o) {
  for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
  return *this;
}

AbstractSeriesPoly AbstractSeriesPoly::operator*(const AbstractSeriesPoly& o) const {
  AbstractSeriesPoly r;
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_) {
      std::vector<int> idx = ka.first;
      idx.insert(idx.end(), kb.first.begin(), kb.first.end());
      r.add_term(std::move(idx), ka.second + kb.second, ca * cb);
    }
  return r;
}

AbstractSeriesPoly AbstractSeriesPoly::operator*(const Rational& c) const {
  AbstractSeriesPoly r;
  for (const auto& [k, coef] : terms_) r.add_term(k.first, k.second, coef * c);
  return r;
}

AbstractSeriesPoly AbstractSeriesPoly::drop_odd() const {
  AbstractSeriesPoly r;
  for (const auto& [k, c] : terms_) {
    bool odd = std::any_of(k.first.begin(), k.first.end(), [](int j) { return j % 2 != 0; });
    if (!odd) r.add_term(k.first, k.second, c);
  }
  return r;
}

double AbstractSeriesPoly::evaluate(std::span<const double> a, double X) const {
  return evaluate<double>(a, X, [](const Rational& q) { return q.get_d(); });
}

Rational AbstractSeriesPoly::evaluate(std::span<const Rational> a, const Rational& X) const {
  return evaluate<Rational>(a, X, [](const Rational& q) { return q; });
}

std::string AbstractSeriesPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [k, c] : terms_) {
    const bool neg = c < 0;
    if (!out.empty())
      out += neg ? " - " : " + ";
    else if (neg)
      out += "-";
    const Rational mag = neg ? Rational(-c) : c;
    std::string body;
    for (int j : k.first) body += (body.empty() ? "" : "*") + std::string("a") + std::to_string(j);
    if (k.second != 0)
      body += (body.empty() ? "" : "*") + std::string("X^") + std::to_string(k.second);
    if (body.empty())
      out += mag.get_str();
    else
      out += (mag == 1 ? "" : mag.get_str() + "*") + body;
  }
  return out;
}

namespace {

Rational factorial(int n) {
  Rational r(1);
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

class BCache {
 public:
  AbstractSeriesPoly get(int n) {
    std::lock_guard lock(mu_);
    if (b_.empty()) b_.push_back(AbstractSeriesPoly::constant(Rational(1)));  // b_0
    while (static_cast<int>(b_.size()) <= n) {
      const int m = static_cast<int>(b_.size());
      AbstractSeriesPoly next;
      for (int k = 1; k <= m; ++k)
        next += (AbstractSeriesPoly::symbol(k) * b_[static_cast<std::size_t>(m - k)]) * Rational(k);
      b_.push_back(next * Rational(1, m));
    }
    return b_[static_cast<std::size_t>(n)];
  }

 private:
  std::mutex mu_;
  std::deque<AbstractSeriesPoly> b_;
};

BCache& b_cache() {
  static BCache c;
  return c;
}

}  // namespace

Rational double_factorial(int n) {
  Rational r(1);
  for (int i = n; i > 1; i -= 2) r *= i;
  return r;
}

Rational g_weight(int n, int m) {
  Rational w = factorial(2 * n - m - 1) / (factorial(m - 1) * factorial(n - m));
  return n % 2 == 0 ? w : Rational(-w);
}

AbstractSeriesPoly gen_b(int n) {
  if (n < 1) throw std::invalid_argument("gen_b: n must be >= 1");
  return b_cache().get(n);
}

ShortTimeGenerators gen_b_g(int n) {
  if (n < 1) throw std::invalid_argument("gen_b_g: n must be >= 1");
  ShortTimeGenerators out;
  out.b = gen_b(n);
  for (int m = 1; m <= n; ++m) {
    AbstractSeriesPoly xp;
    xp.add_term({}, m - 2 * n, g_weight(n, m));
    out.g += gen_b(m) * xp;
  }
  Rational two_n(1);
  for (int i = 0; i < n; ++i) two_n *= 2;
  out.diagonal_divisor = two_n * double_factorial(2 * n - 1);
  return out;
}

}  // namespace asymgreen
