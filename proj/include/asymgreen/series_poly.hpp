#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "asymgreen/rational.hpp"

namespace asymgreen {

// Polynomial in abstract symbols a_1, a_2, ... times integer powers of
// X = x - y.  A key is (sorted index multiset, power of X).
class AbstractSeriesPoly {
 public:
  using Key = std::pair<std::vector<int>, int>;
  using TermMap = std::map<Key, Rational>;

  static AbstractSeriesPoly symbol(int index);
  static AbstractSeriesPoly constant(const Rational& c);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(std::vector<int> indices, int x_power, const Rational& c);

  AbstractSeriesPoly& operator+=(const AbstractSeriesPoly& o);
  AbstractSeriesPoly operator*(const AbstractSeriesPoly& o) const;
  AbstractSeriesPoly operator*(const Rational& c) const;
  bool operator==(const AbstractSeriesPoly& o) const { return terms_ == o.terms_; }

  // Sets every a_j with odd j to zero (the diagonal x = y).
  AbstractSeriesPoly drop_odd() const;
  // visits (indices, x_power, coefficient) for every term
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [k, c] : terms_) fn(k.first, k.second, c);
  }

  // a[j] is a_j (a[0] ignored); xpow(p) returns X^p for the powers present.
  template <class T, class XPow, class FromQ>
  T evaluate_with(std::span<const T> a, XPow xpow, FromQ from_q) const {
    T total = from_q(Rational(0));
    for (const auto& [key, c] : terms_) {
      T term = from_q(c);
      for (int j : key.first) term = term * a[static_cast<std::size_t>(j)];
      if (key.second != 0) term = term * xpow(key.second);
      total = total + term;
    }
    return total;
  }
  template <class T, class FromQ>
  T evaluate(std::span<const T> a, const T& X, FromQ from_q) const {
    auto xpow = [&](int p) {
      T r = from_q(Rational(1));
      for (int i = 0; i < p; ++i) r = r * X;
      for (int i = 0; i < -p; ++i) r = r / X;
      return r;
    };
    return evaluate_with<T>(a, xpow, from_q);
  }
  double evaluate(std::span<const double> a, double X) const;
  Rational evaluate(std::span<const Rational> a, const Rational& X) const;

  std::string to_string() const;

 private:
  TermMap terms_;
};

struct ShortTimeGenerators {
  AbstractSeriesPoly b;      // b_n in a_1..a_n
  AbstractSeriesPoly g;      // g_n in b's expanded, with X powers
  Rational diagonal_divisor;  // 2^n (2n-1)!!
};

// b_n via n b_n = sum_k k a_k b_{n-k}; g_n from the b_m; diagonal divisor.
ShortTimeGenerators gen_b_g(int n);
// b_n alone (memoized)
AbstractSeriesPoly gen_b(int n);
// coefficient (-1)^n (2n-m-1)! / ((m-1)! (n-m)!) of b_m X^{m-2n} in g_n
Rational g_weight(int n, int m);
Rational double_factorial(int n);

}  // namespace asymgreen
