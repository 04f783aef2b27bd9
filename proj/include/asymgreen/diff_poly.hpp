#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "asymgreen/rational.hpp"

namespace asymgreen {

// Jet variables are f, f', f'', ... in F basis and V_S, V_S', ... in VS basis.
enum class Basis { F, VS };

const char* basis_name(Basis b);
char basis_symbol(Basis b);

// Product of powers of jet variables, stored as exps[j] = exponent of the
// order-j derivative.  Trailing zero exponents are never stored.
class DiffMonomial {
 public:
  DiffMonomial() = default;
  static DiffMonomial jet(int order, int power = 1);
  static DiffMonomial from_exponents(std::vector<int> exps);

  int exponent(int order) const;
  int max_order() const { return static_cast<int>(exps_.size()) - 1; }
  int degree() const;
  // sum over factors of (order + 1); the grading used for canonical order
  int weight() const;
  bool is_one() const { return exps_.empty(); }
  const std::vector<int>& exponents() const { return exps_; }

  DiffMonomial operator*(const DiffMonomial& o) const;
  bool operator==(const DiffMonomial& o) const { return exps_ == o.exps_; }

  std::string to_string(Basis b) const;

 private:
  void trim();
  std::vector<int> exps_;
};

// Graded by weight; within a grade the exponent of the highest derivative
// order decides first, larger exponent first.
struct CanonicalOrder {
  bool operator()(const DiffMonomial& a, const DiffMonomial& b) const;
};

class DiffPoly {
 public:
  using TermMap = std::map<DiffMonomial, Rational, CanonicalOrder>;

  explicit DiffPoly(Basis b = Basis::F) : basis_(b) {}
  static DiffPoly constant(const Rational& c, Basis b = Basis::F);
  static DiffPoly jet(int order, Basis b = Basis::F, int power = 1);
  static DiffPoly monomial(const Rational& c, const DiffMonomial& m, Basis b = Basis::F);

  Basis basis() const { return basis_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coefficient(const DiffMonomial& m) const;
  // highest jet order present, -1 for constants
  int max_order() const;

  void add_term(const DiffMonomial& m, const Rational& c);

  DiffPoly& operator+=(const DiffPoly& o);
  DiffPoly& operator-=(const DiffPoly& o);
  DiffPoly& operator*=(const Rational& c);
  DiffPoly operator+(const DiffPoly& o) const;
  DiffPoly operator-(const DiffPoly& o) const;
  DiffPoly operator-() const;
  DiffPoly operator*(const DiffPoly& o) const;
  DiffPoly operator*(const Rational& c) const;
  DiffPoly pow(int e) const;

  bool operator==(const DiffPoly& o) const {
    return basis_ == o.basis_ && terms_ == o.terms_;
  }

  std::string to_string() const;

  // Evaluates with jets[j] standing for the order-j variable.  T must be
  // constructible from double or provide the conversion through `from_q`.
  template <class T, class FromQ>
  T evaluate(std::span<const T> jets, FromQ from_q) const {
    T total = from_q(Rational(0));
    for (const auto& [m, c] : terms_) {
      T term = from_q(c);
      const auto& e = m.exponents();
      for (std::size_t j = 0; j < e.size(); ++j)
        for (int p = 0; p < e[j]; ++p) term = term * jets[j];
      total = total + term;
    }
    return total;
  }
  double evaluate(std::span<const double> jets) const;
  Rational evaluate(std::span<const Rational> jets) const;

 private:
  Basis basis_;
  TermMap terms_;
};

inline DiffPoly operator*(const Rational& c, const DiffPoly& p) { return p * c; }

// Total x-derivative: the order-j variable maps to order j+1, Leibniz rule.
DiffPoly dpoly_dx(const DiffPoly& p);
DiffPoly dpoly_dx(const DiffPoly& p, int times);

// Replaces the order-j variable by images[j]; images must cover max_order().
DiffPoly substitute(const DiffPoly& p, const std::vector<DiffPoly>& images);

// V_S^{(j)} -> d^j/dx^j (f^2 + f' + e0); the E0 shift of the V_S basis.
DiffPoly vs_to_f(const DiffPoly& p, const Rational& e0 = Rational(0));

}  // namespace asymgreen
