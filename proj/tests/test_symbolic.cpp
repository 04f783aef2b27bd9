#include <functional>
#include <thread>

#include "asymgreen/diff_poly.hpp"
#include "asymgreen/generators.hpp"
#include "asymgreen/rat_poly.hpp"
#include "asymgreen/series_poly.hpp"
#include "doctest.h"
#include "poly_oracle.hpp"

using namespace asymgreen;

namespace {

DiffPoly f(int j, int p = 1) { return DiffPoly::jet(j, Basis::F, p); }
DiffPoly v(int j, int p = 1) { return DiffPoly::jet(j, Basis::VS, p); }
Rational q(long a, long b = 1) { return make_rational(a, b); }

// every ordered tuple (j_1..j_m) of positive integers summing to n, weight 1/m!
AbstractSeriesPoly brute_force_b(int n) {
  AbstractSeriesPoly out;
  std::vector<int> tuple;
  std::function<void(int)> rec = [&](int remaining) {
    if (remaining == 0) {
      Rational w(1);
      for (std::size_t i = 2; i <= tuple.size(); ++i) w /= static_cast<long>(i);
      out.add_term(tuple, 0, w);
      return;
    }
    for (int j = 1; j <= remaining; ++j) {
      tuple.push_back(j);
      rec(remaining - j);
      tuple.pop_back();
    }
  };
  rec(n);
  return out;
}

}  // namespace

TEST_SUITE("symbolic") {
  TEST_CASE("canonical rendering") {
    CHECK(DiffPoly().to_string() == "0");
    CHECK((f(0) * f(0) * q(2) + f(1)).to_string() == "f1 + 2*f0^2");
    CHECK((f(2) * q(1, 2) - DiffPoly::constant(q(3))).to_string() == "-3 + 1/2*f2");
    CHECK(v(2).to_string() == "v2");
  }

  TEST_CASE("dpoly_dx") {
    CHECK(dpoly_dx(f(0, 2)) == f(0) * f(1) * q(2));
    CHECK(dpoly_dx(-f(1) - f(0, 2)) == -f(2) - f(0) * f(1) * q(2));
    CHECK(dpoly_dx(DiffPoly()).is_zero());
    CHECK(dpoly_dx(v(0)).basis() == Basis::VS);
    // Leibniz on a product of two non-trivial factors
    DiffPoly a = f(0) * f(2) + f(1), b = f(0, 3) - f(3);
    CHECK(dpoly_dx(a * b) == dpoly_dx(a) * b + a * dpoly_dx(b));
  }

  TEST_CASE("apply_M") {
    const XiPoly fx = XiPoly::constant(f(0));
    CHECK(apply_M(fx) == XiPoly({f(1), -f(0, 2)}));
    CHECK(apply_M(XiPoly()).is_zero());
    const XiPoly g({f(1), -f(0, 2)});
    CHECK(apply_M(g) == XiPoly({f(2) - f(0, 3), -f(0) * f(1) * q(2), f(0, 3)}));
    CHECK_THROWS_AS(apply_M(XiPoly::constant(v(0))), std::invalid_argument);
  }

  TEST_CASE("c-tilde table") {
    CHECK(gen_c_tilde(1).to_string() == "(-f0)");
    CHECK(gen_c_tilde(2).to_string() == "(-f1) + (f0^2)*xi");
    CHECK(gen_c_tilde(3).to_string() == "(-f2 + f0^3) + (2*f0*f1)*xi + (-f0^3)*xi^2");
    CHECK(gen_c_tilde(4).to_string() ==
          "(-f3 + 5*f0^2*f1) + (2*f0*f2 + f1^2 - 2*f0^4)*xi + (-3*f0^2*f1)*xi^2 + (f0^4)*xi^3");
    for (int n = 1; n <= 12; ++n) CHECK(gen_c_tilde(n).degree() == n - 1);
    CHECK_THROWS_AS(gen_c_tilde(13), std::out_of_range);
    CHECK(gen_c_tilde(13, 13).degree() == 12);
  }

  TEST_CASE("c-tilde vanishes for f = 0") {
    auto c = gen_c_tilde(2);
    std::vector<Rational> zero(8, Rational(0));
    for (const auto& p : c.coeffs()) CHECK(p.evaluate(std::span<const Rational>(zero)) == 0);
  }

  TEST_CASE("K table") {
    CHECK(gen_K(0).to_string() == "(f0)");
    CHECK(gen_K(1).to_string() == "(f1) + (-2*f0^2)*xi");
    CHECK(gen_K(2).to_string() == "(f2 - f0^3) + (-4*f0*f1)*xi + (3*f0^3)*xi^2");
    CHECK(gen_K(3).to_string() ==
          "(f3 - 5*f0^2*f1) + (-4*f0*f2 - 2*f1^2 + 4*f0^4)*xi + (9*f0^2*f1)*xi^2 + (-4*f0^4)*xi^3");
    // leading structure K_n = f^(n) + lower orders
    for (int n = 0; n <= 8; ++n) {
      DiffPoly k0 = gen_K(n).coeff(0);
      CHECK(k0.coefficient(DiffMonomial::jet(n)) == 1);
      CHECK(k0.max_order() == n);
      for (int j = 1; j <= gen_K(n).degree(); ++j) CHECK(gen_K(n).coeff(j).max_order() < n);
    }
  }

  TEST_CASE("s table, f basis") {
    CHECK(gen_s(1, Basis::F).to_string() == "-f0");
    CHECK(gen_s(2, Basis::F).to_string() == "-f1 - f0^2");
    CHECK(gen_s(3, Basis::F).to_string() == "-f2 - 2*f0*f1");
    CHECK(gen_s(4, Basis::F).to_string() == "-f3 - 2*f0*f2 - f1^2 + 2*f0^2*f1 + f0^4");
    CHECK(gen_s(5, Basis::F).to_string() ==
          "-f4 - 2*f0*f3 - 2*f1*f2 + 4*f0^2*f2 + 8*f0*f1^2 + 8*f0^3*f1");
  }

  TEST_CASE("s table, V_S basis") {
    CHECK(gen_s(2, Basis::VS).to_string() == "-v0");
    CHECK(gen_s(3, Basis::VS).to_string() == "-v1");
    CHECK(gen_s(4, Basis::VS).to_string() == "v0^2 - v2");
    CHECK(gen_s(5, Basis::VS) == dpoly_dx(v(0, 2) * q(2) - v(2)));
    CHECK_THROWS_AS(gen_s(1, Basis::VS), std::invalid_argument);
  }

  TEST_CASE("alpha table") {
    CHECK(gen_alpha(2, Basis::F).to_string() == "-f1 - f0^2");
    CHECK(gen_alpha(4, Basis::F) == f(0, 4) * q(2) + f(0, 2) * f(1) * q(4) - f(0) * f(2) * q(2) - f(3));
    CHECK(gen_alpha(4, Basis::VS).to_string() == "2*v0^2 - v2");
    CHECK_THROWS_AS(gen_alpha(3, Basis::F), std::invalid_argument);
  }

  TEST_CASE("V_S-basis coefficient forms") {
    // integrands / pointwise parts of a_1..a_4 in terms of V_S
    CHECK((-gen_s(2, Basis::VS)).to_string() == "v0");
    CHECK(gen_alpha(2, Basis::VS).to_string() == "-v0");
    CHECK((-gen_s(4, Basis::VS)).to_string() == "-v0^2 + v2");
    CHECK(gen_alpha(4, Basis::VS).to_string() == "2*v0^2 - v2");
  }

  TEST_CASE("alpha_4 agrees with the V_S form, not the +f''' print") {
    CHECK(gen_alpha(4, Basis::F) == vs_to_f(gen_alpha(4, Basis::VS)));
    DiffPoly printed = f(0, 4) * q(2) + f(0, 2) * f(1) * q(4) - f(0) * f(2) * q(2) + f(3);
    CHECK_FALSE(gen_alpha(4, Basis::F) == printed);
  }

  TEST_CASE("route equivalence n <= 12") {
    for (int n = 2; n <= 12; ++n) {
      CAPTURE(n);
      CHECK(gen_s(n, Basis::F) == vs_to_f(gen_s(n, Basis::VS)));
    }
  }

  TEST_CASE("antiderivative identity") {
    for (int i = 1; i <= 5; ++i) {
      CAPTURE(i);
      CHECK(dpoly_dx(gen_alpha(2 * i, Basis::F)) == gen_s(2 * i + 1, Basis::F));
      CHECK(dpoly_dx(gen_alpha(2 * i, Basis::VS)) == gen_s(2 * i + 1, Basis::VS));
    }
  }

  TEST_CASE("alpha from brute-force compositions") {
    for (int i = 1; i <= 4; ++i) {
      DiffPoly expect(Basis::F);
      std::vector<int> parts;
      std::function<void(int)> rec = [&](int remaining) {
        if (remaining == 0) {
          const int m = static_cast<int>(parts.size());
          Rational w(1);
          for (int t = 0; t < m; ++t) w *= 2;
          w /= m;
          DiffPoly prod = DiffPoly::constant(w * Rational(1, 2));
          for (int j : parts) prod = prod * gen_s(2 * j, Basis::F);
          expect += prod;
          return;
        }
        for (int j = 1; j <= remaining; ++j) {
          parts.push_back(j);
          rec(remaining - j);
          parts.pop_back();
        }
      };
      rec(i);
      CHECK(gen_alpha(2 * i, Basis::F) == expect);
    }
  }

  TEST_CASE("memoized generators are deterministic under concurrency") {
    std::vector<std::string> results(4);
    std::vector<std::thread> ts;
    for (int t = 0; t < 4; ++t)
      ts.emplace_back([&, t] { results[static_cast<std::size_t>(t)] = gen_s(10, Basis::F).to_string(); });
    for (auto& t : ts) t.join();
    for (const auto& r : results) CHECK(r == results.front());
    CHECK(gen_s(10, Basis::F).to_string() == results.front());
  }

  TEST_CASE("b_n matches brute-force composition") {
    CHECK(gen_b(2).to_string() == "1/2*a1*a1 + a2");
    for (int n = 1; n <= 8; ++n) {
      CAPTURE(n);
      CHECK(gen_b(n) == brute_force_b(n));
    }
  }

  TEST_CASE("double factorial divisor") {
    CHECK(double_factorial(3) == 3);
    CHECK(double_factorial(7) == 105);
    CHECK(gen_b_g(2).diagonal_divisor == 12);
    CHECK(gen_b_g(3).diagonal_divisor == 120);
  }

  TEST_CASE("example 1 coefficients from f = -1") {
    const RatPoly fm1(Rational(-1));
    const Rational x = q(7, 3), y = q(-1, 2), X = x - y;
    CHECK(poly_oracle::a_exact(1, fm1, x, y) == X);
    CHECK(poly_oracle::a_exact(2, fm1, x, y) == -2);
    CHECK(poly_oracle::a_exact(3, fm1, x, y) == -X);
    CHECK(poly_oracle::a_exact(4, fm1, x, y) == 4);
    // continuing the 1/k expansion of the closed form
    CHECK(poly_oracle::a_exact(5, fm1, x, y) == 2 * X);
    CHECK(poly_oracle::a_exact(6, fm1, x, y) == q(-32, 3));
    CHECK(poly_oracle::a_exact(7, fm1, x, y) == -5 * X);
  }

  TEST_CASE("example 1 short-time coefficients") {
    const RatPoly fm1(Rational(-1));
    Rational fact(1);
    for (int n = 1; n <= 6; ++n) {
      fact *= n;
      const Rational expect = (n % 2 == 0 ? Rational(1) : Rational(-1)) / fact;
      for (const Rational X : {q(1), q(3, 7), q(-5, 2)}) {
        std::vector<Rational> a(static_cast<std::size_t>(n) + 1, Rational(0));
        for (int j = 1; j <= n; ++j) a[static_cast<std::size_t>(j)] = poly_oracle::a_exact(j, fm1, X, Rational(0));
        CHECK(gen_b_g(n).g.evaluate(std::span<const Rational>(a), X) == expect);
      }
    }
    // b_4(x,x) = a_4 + a_2^2/2 with a_2 = -2, a_4 = 4
    std::vector<Rational> diag{Rational(0), Rational(0), Rational(-2), Rational(0), Rational(4)};
    const Rational b4 = gen_b(4).evaluate(std::span<const Rational>(diag), Rational(0));
    CHECK(b4 == 6);
    CHECK(b4 / gen_b_g(2).diagonal_divisor == q(1, 2));
  }

  TEST_CASE("diagonal limit of the short-time coefficients") {
    // y -> x limit of the off-diagonal form equals the diagonal formula
    const std::vector<RatPoly> drifts{RatPoly(Rational(-1)), -RatPoly::z(),
                                      RatPoly({q(1, 3), q(-1), q(1)})};
    for (const auto& fp : drifts) {
      for (const Rational m : {q(0), q(2, 5)}) {
        for (int n = 1; n <= 3; ++n) {
          CAPTURE(n);
          std::vector<RatPoly> aX(static_cast<std::size_t>(2 * n) + 1);
          for (int j = 1; j <= 2 * n; ++j) aX[static_cast<std::size_t>(j)] = poly_oracle::a_in_X(j, fp, m);
          RatPoly num;  // X^{2n} g_n(X)
          for (int mm = 1; mm <= n; ++mm) {
            RatPoly bm = gen_b(mm).evaluate_with<RatPoly>(
                std::span<const RatPoly>(aX), [](int) -> RatPoly { throw std::logic_error("no X powers in b_m"); },
                [](const Rational& c) { return RatPoly(c); });
            std::vector<Rational> shift(static_cast<std::size_t>(mm) + 1, Rational(0));
            shift.back() = 1;
            num = num + bm * RatPoly(shift) * RatPoly(g_weight(n, mm));
          }
          for (int d = 0; d < 2 * n; ++d) {
            const Rational c = d <= num.degree() ? num.coeffs()[static_cast<std::size_t>(d)] : Rational(0);
            CHECK(c == 0);
          }
          const Rational limit = 2 * n <= num.degree() ? num.coeffs()[static_cast<std::size_t>(2 * n)] : Rational(0);
          std::vector<Rational> diag(static_cast<std::size_t>(2 * n) + 1, Rational(0));
          for (int j = 2; j <= 2 * n; j += 2) diag[static_cast<std::size_t>(j)] = poly_oracle::a_exact(j, fp, m, m);
          const Rational formula =
              gen_b(2 * n).evaluate(std::span<const Rational>(diag), Rational(1)) / gen_b_g(n).diagonal_divisor;
          CHECK(limit == formula);
        }
      }
    }
  }

  TEST_CASE("example 2 short-time polynomials") {
    const RatPoly fz = -RatPoly::z();
    auto g_at = [&](int n, const Rational& x, const Rational& y) {
      std::vector<Rational> a(static_cast<std::size_t>(n) + 1, Rational(0));
      for (int j = 1; j <= n; ++j) a[static_cast<std::size_t>(j)] = poly_oracle::a_exact(j, fz, x, y);
      return gen_b_g(n).g.evaluate(std::span<const Rational>(a), x - y);
    };
    // agreement on a grid larger than the total degree forces polynomial identity
    for (int i = -4; i <= 4; ++i)
      for (int j = -4; j <= 4; ++j) {
        const Rational x = q(i, 3) + q(1, 7), y = q(j, 2) - q(1, 5);
        const Rational s = x * x + x * y + y * y;
        CHECK(g_at(1, x, y) == 1 - s / 3);
        CHECK(g_at(2, x, y) == q(1, 6) - s / 3 + s * s / 18);
        CHECK(g_at(3, x, y) == q(-1, 6) + x * y / 15 + s / 30 + s * s / 18 - s * s * s / 162);
      }
  }
}
