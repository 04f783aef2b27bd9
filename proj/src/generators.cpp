#include "asymgreen/generators.hpp"

#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace asymgreen {

namespace {

void check_order(int n, int lo, int max_order, const char* what) {
  if (n < lo) throw std::invalid_argument(std::string(what) + ": order too small");
  if (n > max_order)
    throw std::out_of_range(std::string(what) + ": order " + std::to_string(n) +
                            " exceeds max_order " + std::to_string(max_order));
}

// Entries are appended and never erased, so references stay valid.
class Cache {
 public:
  const XiPoly& c_tilde(int n) {
    std::lock_guard lock(mu_);
    if (c_tilde_.empty()) c_tilde_.push_back(XiPoly::constant(-DiffPoly::jet(0)));
    while (static_cast<int>(c_tilde_.size()) < n) c_tilde_.push_back(apply_M(c_tilde_.back()));
    return c_tilde_[static_cast<std::size_t>(n - 1)];
  }

  const DiffPoly& s(int n, Basis b) {
    if (b == Basis::F) {
      const XiPoly& c = c_tilde(n);
      std::lock_guard lock(mu_);
      auto it = s_f_.find(n);
      if (it == s_f_.end()) it = s_f_.emplace(n, c.evaluate_at(Rational(-1))).first;
      return it->second;
    }
    std::lock_guard lock(mu_);
    if (s_vs_.empty()) s_vs_.push_back(-DiffPoly::jet(0, Basis::VS));  // s_2
    while (static_cast<int>(s_vs_.size()) + 1 < n) {
      const int m = static_cast<int>(s_vs_.size()) + 1;  // highest order held
      DiffPoly next = dpoly_dx(s_vs_.back());
      for (int j = 2; j <= m - 1; ++j) next += vs_at(j) * vs_at(m + 1 - j);
      s_vs_.push_back(std::move(next));
    }
    return s_vs_[static_cast<std::size_t>(n - 2)];
  }

 private:
  const DiffPoly& vs_at(int n) const { return s_vs_[static_cast<std::size_t>(n - 2)]; }

  std::mutex mu_;
  std::deque<XiPoly> c_tilde_;
  std::map<int, DiffPoly> s_f_;
  std::deque<DiffPoly> s_vs_;
};

Cache& cache() {
  static Cache c;
  return c;
}

}  // namespace

XiPoly apply_M(const XiPoly& g) {
  for (const auto& p : g.coeffs())
    if (p.basis() != Basis::F) throw std::invalid_argument("apply_M is defined on the f basis only");
  const int d = g.degree();
  if (d < 0) return XiPoly();
  const DiffPoly f = DiffPoly::jet(0);
  // laurent[j + 1] holds the coefficient of xi^j, j = -1 .. d+1
  std::vector<DiffPoly> laurent(static_cast<std::size_t>(d) + 3, DiffPoly(Basis::F));
  auto at = [&](int j) -> DiffPoly& { return laurent[static_cast<std::size_t>(j + 1)]; };
  for (int j = 0; j <= d; ++j) {
    const DiffPoly& p = g.coeffs()[static_cast<std::size_t>(j)];
    at(j + 1) -= f * p;  // -f xi g
    at(j - 1) += f * p;  // +f g / xi
    at(j) += dpoly_dx(p) * Rational(1, j + 1);
  }
  at(-1) -= f * g.coeff(0);  // -f g(x,0) / xi
  if (!at(-1).is_zero()) throw std::logic_error("apply_M: xi^-1 terms failed to cancel");
  return XiPoly(std::vector<DiffPoly>(laurent.begin() + 1, laurent.end()));
}

XiPoly gen_c_tilde(int n, int max_order) {
  check_order(n, 1, max_order, "gen_c_tilde");
  return cache().c_tilde(n);
}

XiPoly gen_K(int n, int max_order) {
  check_order(n, 0, max_order, "gen_K");
  const XiPoly& c = cache().c_tilde(n + 1);
  std::vector<DiffPoly> out;
  for (int j = 0; j <= c.degree(); ++j) out.push_back(c.coeff(j) * Rational(-(1 + j)));
  return XiPoly(std::move(out));
}

DiffPoly gen_s(int n, Basis basis, int max_order) {
  if (basis == Basis::VS && n == 1)
    throw std::invalid_argument("gen_s: s_1 = -f has no V_S-basis form");
  check_order(n, 1, max_order, "gen_s");
  return cache().s(n, basis);
}

DiffPoly gen_alpha(int n, Basis basis, int max_order) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("gen_alpha: order must be even and >= 2");
  check_order(n, 2, max_order, "gen_alpha");
  const int i = n / 2;
  // A(w) = sum_j s_{2j} w^j; alpha_{2i} = 1/2 [w^i] sum_m (2^m/m) A^m
  std::vector<DiffPoly> a(static_cast<std::size_t>(i) + 1, DiffPoly(basis));
  for (int j = 1; j <= i; ++j) a[static_cast<std::size_t>(j)] = cache().s(2 * j, basis);
  std::vector<DiffPoly> power = a;  // A^1
  DiffPoly total = power[static_cast<std::size_t>(i)] * Rational(2);
  for (int m = 2; m <= i; ++m) {
    std::vector<DiffPoly> next(static_cast<std::size_t>(i) + 1, DiffPoly(basis));
    for (int p = m - 1; p <= i; ++p)
      for (int q = 1; p + q <= i; ++q)
        next[static_cast<std::size_t>(p + q)] +=
            power[static_cast<std::size_t>(p)] * a[static_cast<std::size_t>(q)];
    power = std::move(next);
    Rational w(1);
    mpz_mul_2exp(w.get_num_mpz_t(), w.get_num_mpz_t(), static_cast<unsigned long>(m));
    w /= m;
    total += power[static_cast<std::size_t>(i)] * w;
  }
  return total * Rational(1, 2);
}

}  // namespace asymgreen
