#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace asymgreen {

// Truncated power series c_0 + c_1 h + ... + c_K h^K about a point; c_j is
// the j-th Taylor coefficient (derivative / j!).
template <class T>
class Taylor {
 public:
  Taylor() = default;
  explicit Taylor(std::size_t order, T c0 = T(0)) : c_(order + 1, T(0)) { c_[0] = c0; }
  static Taylor variable(std::size_t order, T at) {
    Taylor t(order, at);
    if (order >= 1) t.c_[1] = T(1);
    return t;
  }
  static Taylor from_derivatives(const std::vector<T>& d) {
    Taylor t(d.size() - 1);
    double fact = 1;
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (j > 0) fact *= static_cast<double>(j);
      t.c_[j] = d[j] / fact;
    }
    return t;
  }

  std::size_t order() const { return c_.size() - 1; }
  const T& operator[](std::size_t j) const { return c_[j]; }
  T& operator[](std::size_t j) { return c_[j]; }
  const std::vector<T>& coeffs() const { return c_; }

  std::vector<T> derivatives() const {
    std::vector<T> d(c_.size());
    double fact = 1;
    for (std::size_t j = 0; j < c_.size(); ++j) {
      if (j > 0) fact *= static_cast<double>(j);
      d[j] = c_[j] * fact;
    }
    return d;
  }
  // d/dh, losing one order
  Taylor derivative() const {
    Taylor r(order() == 0 ? 0 : order() - 1);
    for (std::size_t j = 1; j < c_.size(); ++j) r.c_[j - 1] = c_[j] * static_cast<double>(j);
    return r;
  }
  Taylor truncated(std::size_t order) const {
    Taylor r(order);
    for (std::size_t j = 0; j <= order && j < c_.size(); ++j) r.c_[j] = c_[j];
    return r;
  }
  T evaluate(T h) const {
    T acc(0);
    for (std::size_t j = c_.size(); j-- > 0;) acc = acc * h + c_[j];
    return acc;
  }

  Taylor operator-() const {
    Taylor r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  Taylor& operator+=(const Taylor& o) {
    fit(o);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    fit(o);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= o.c_[j];
    return *this;
  }
  Taylor& operator*=(const T& s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator*(Taylor a, const T& s) { return a *= s; }
  friend Taylor operator*(const T& s, Taylor a) { return a *= s; }
  friend Taylor operator+(Taylor a, const T& s) {
    a.c_[0] += s;
    return a;
  }
  friend Taylor operator-(Taylor a, const T& s) {
    a.c_[0] -= s;
    return a;
  }
  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    const std::size_t K = std::min(a.order(), b.order());
    Taylor r(K);
    for (std::size_t n = 0; n <= K; ++n) {
      T s(0);
      for (std::size_t j = 0; j <= n; ++j) s += a.c_[j] * b.c_[n - j];
      r.c_[n] = s;
    }
    return r;
  }
  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    const std::size_t K = std::min(a.order(), b.order());
    if (b.c_[0] == T(0)) throw std::domain_error("Taylor division by a series vanishing at the point");
    Taylor r(K);
    for (std::size_t n = 0; n <= K; ++n) {
      T s = a.c_[n];
      for (std::size_t j = 1; j <= n; ++j) s -= b.c_[j] * r.c_[n - j];
      r.c_[n] = s / b.c_[0];
    }
    return r;
  }

 private:
  void fit(const Taylor& o) {
    if (o.c_.size() < c_.size()) c_.resize(o.c_.size());
  }
  std::vector<T> c_;
};

namespace taylor {

// a' = u' a  =>  n a_n = sum_{j=1}^n j u_j a_{n-j}
template <class T>
Taylor<T> exp(const Taylor<T>& u) {
  using std::exp;
  Taylor<T> a(u.order(), exp(u[0]));
  for (std::size_t n = 1; n <= u.order(); ++n) {
    T s(0);
    for (std::size_t j = 1; j <= n; ++j) s += static_cast<double>(j) * u[j] * a[n - j];
    a[n] = s / static_cast<double>(n);
  }
  return a;
}

// u a' = u'  =>  n u_0 a_n = n u_n - sum_{j=1}^{n-1} j a_j u_{n-j}
template <class T>
Taylor<T> log(const Taylor<T>& u) {
  using std::log;
  if (u[0] == T(0)) throw std::domain_error("log of a series vanishing at the point");
  Taylor<T> a(u.order(), log(u[0]));
  for (std::size_t n = 1; n <= u.order(); ++n) {
    T s = static_cast<double>(n) * u[n];
    for (std::size_t j = 1; j < n; ++j) s -= static_cast<double>(j) * a[j] * u[n - j];
    a[n] = s / (static_cast<double>(n) * u[0]);
  }
  return a;
}

// a^2 = u  =>  2 a_0 a_n = u_n - sum_{j=1}^{n-1} a_j a_{n-j}
template <class T>
Taylor<T> sqrt_with_root(const Taylor<T>& u, T root) {
  Taylor<T> a(u.order(), root);
  for (std::size_t n = 1; n <= u.order(); ++n) {
    T s = u[n];
    for (std::size_t j = 1; j < n; ++j) s -= a[j] * a[n - j];
    a[n] = s / (2.0 * root);
  }
  return a;
}

template <class T>
Taylor<T> sqrt(const Taylor<T>& u) {
  using std::sqrt;
  if (u[0] == T(0)) throw std::domain_error("sqrt of a series vanishing at the point");
  return sqrt_with_root(u, sqrt(u[0]));
}

// s' = c u', c' = sign * s u'  (sign -1: sin/cos, +1: sinh/cosh)
template <class T>
void sin_cos(const Taylor<T>& u, Taylor<T>& s, Taylor<T>& c, double sign) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  s = Taylor<T>(u.order(), sign < 0 ? sin(u[0]) : sinh(u[0]));
  c = Taylor<T>(u.order(), sign < 0 ? cos(u[0]) : cosh(u[0]));
  for (std::size_t n = 1; n <= u.order(); ++n) {
    T ss(0), cc(0);
    for (std::size_t j = 1; j <= n; ++j) {
      ss += static_cast<double>(j) * u[j] * c[n - j];
      cc += static_cast<double>(j) * u[j] * s[n - j];
    }
    s[n] = ss / static_cast<double>(n);
    c[n] = sign * cc / static_cast<double>(n);
  }
}

// a' = (1 - a^2) u'; stays finite for large |u| where sinh/cosh overflow
template <class T>
Taylor<T> tanh(const Taylor<T>& u) {
  using std::tanh;
  Taylor<T> a(u.order(), tanh(u[0]));
  std::vector<T> b(u.order() + 1, T(0));  // 1 - a^2
  auto fill_b = [&](std::size_t m) {
    T s = m == 0 ? T(1) : T(0);
    for (std::size_t i = 0; i <= m; ++i) s -= a[i] * a[m - i];
    b[m] = s;
  };
  fill_b(0);
  for (std::size_t n = 1; n <= u.order(); ++n) {
    T s(0);
    for (std::size_t j = 1; j <= n; ++j) s += static_cast<double>(j) * u[j] * b[n - j];
    a[n] = s / static_cast<double>(n);
    fill_b(n);
  }
  return a;
}

// s' = -s tanh(u) u'
template <class T>
Taylor<T> sech(const Taylor<T>& u) {
  using std::cosh;
  using std::exp;
  using std::abs;
  const Taylor<T> t = tanh(u);
  T s0;
  if constexpr (std::is_floating_point_v<T>) {
    const T e = exp(-abs(u[0]));  // 1/cosh without overflow
    s0 = 2.0 * e / (1.0 + e * e);
  } else {
    s0 = T(1) / cosh(u[0]);
  }
  Taylor<T> s(u.order(), s0);
  std::vector<T> st(u.order() + 1, T(0));
  auto fill = [&](std::size_t m) {
    T acc(0);
    for (std::size_t i = 0; i <= m; ++i) acc += s[i] * t[m - i];
    st[m] = acc;
  };
  fill(0);
  for (std::size_t n = 1; n <= u.order(); ++n) {
    T acc(0);
    for (std::size_t j = 1; j <= n; ++j) acc += static_cast<double>(j) * u[j] * st[n - j];
    s[n] = -acc / static_cast<double>(n);
    fill(n);
  }
  return s;
}

template <class T>
Taylor<T> ipow(const Taylor<T>& u, int p) {
  if (p < 0) return Taylor<T>(u.order(), T(1)) / ipow(u, -p);
  Taylor<T> r(u.order(), T(1)), base = u;
  while (p > 0) {
    if (p & 1) r = r * base;
    p >>= 1;
    if (p > 0) base = base * base;
  }
  return r;
}

}  // namespace taylor

}  // namespace asymgreen
