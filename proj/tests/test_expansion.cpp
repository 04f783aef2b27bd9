#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

#include "asymgreen/expansion.hpp"
#include "asymgreen/taylor.hpp"
#include "doctest.h"

using namespace asymgreen;

namespace {

bool close(double a, double b, double rel, double abs_floor = 0) {
  return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_floor);
}

using Coeff = std::function<double(double, double)>;

void check_table(const char* name, const std::vector<Coeff>& table, double x, double y, double tol) {
  const PotentialSpec s = builtin(name);
  ExpansionOptions opt;
  opt.force = true;
  for (std::size_t n = 1; n <= table.size(); ++n) {
    CAPTURE(name);
    CAPTURE(n);
    CAPTURE(x);
    CAPTURE(y);
    const double want = table[n - 1](x, y);
    const double got = coeff_a(static_cast<int>(n), x, y, s, opt);
    CHECK(close(got, want, tol, tol));
  }
}

const double e = std::numbers::e;

}  // namespace

TEST_SUITE("expansion") {
  TEST_CASE("eval_s examples") {
    const PotentialSpec ex1 = builtin("ex1"), ex2 = builtin("ex2");
    for (double z : {-2.0, 0.3, 5.0}) CHECK(eval_s(2, z, ex1) == doctest::Approx(-1).epsilon(1e-14));
    CHECK(eval_s(2, 0, ex2) == doctest::Approx(1).epsilon(1e-14));
    const PotentialSpec zero = make_potential(PotentialMode::FGiven, "0");
    for (int n = 1; n <= 12; ++n) CHECK(eval_s(n, 0.7, zero) == 0);
    // V_S basis: s_2 = -V_S, s_4 = V_S^2 - V_S''
    ExpansionOptions vs;
    vs.basis = Basis::VS;
    CHECK(eval_s(2, 1.5, ex2, vs) == doctest::Approx(-(1.5 * 1.5 - 1)).epsilon(1e-14));
    CHECK(eval_s(4, 1.5, ex2, vs) == doctest::Approx(std::pow(1.25, 2) - 2).epsilon(1e-13));
    CHECK_THROWS_AS(eval_s(2, 0.0, builtin("ex5")), std::invalid_argument);
    CHECK_THROWS_AS(eval_s(2, 1.0, builtin("ex8"), [] { ExpansionOptions o; o.basis = Basis::F; return o; }()), PotentialError);
  }

  TEST_CASE("s distribution at jumps") {
    // ex5: f = 1 - 2 theta(z): s_2 = -f' - f^2 = 2 delta - 1
    const DistValue d = s_distribution(2, builtin("ex5"), -1, 1);
    CHECK(d.smooth(0.4) == doctest::Approx(-1));
    REQUIRE(d.singular.size() == 1);
    CHECK(d.singular[0].point == 0);
    CHECK(d.singular[0].order == 0);
    CHECK(d.singular[0].coeff == doctest::Approx(2));
    CHECK(s_distribution(2, builtin("ex5"), 0.5, 1).singular.empty());
    CHECK_THROWS_AS(s_distribution(4, builtin("ex5"), -1, 1), DistributionProductError);
    // ex6: f' jumps by 1/2; s_3 = -f'' - 2 f f' ... carries 1/2 delta with sign -1
    const DistValue d6 = s_distribution(3, builtin("ex6"), -1, 1);
    double c0 = 0;
    for (const auto& t : d6.singular)
      if (t.order == 0) c0 += t.coeff;
    CHECK(c0 == doctest::Approx(-0.5));
  }

  TEST_CASE("example 1 coefficients") {
    const std::vector<Coeff> t{
        [](double x, double y) { return x - y; }, [](double, double) { return -2.0; },
        [](double x, double y) { return -(x - y); }, [](double, double) { return 4.0; },
        [](double x, double y) { return 2 * (x - y); }, [](double, double) { return -32.0 / 3; },
        [](double x, double y) { return -5 * (x - y); }};
    check_table("ex1", t, 1.0, 0.0, 1e-12);
    check_table("ex1", t, 2.5, -0.7, 1e-12);
  }

  TEST_CASE("example 2 coefficients") {
    const std::vector<Coeff> t{
        [](double x, double y) { return (x * x * x - y * y * y) / 3 - (x - y); },
        [](double x, double y) { return 2 - (x * x + y * y); },
        [](double x, double y) {
          return -(std::pow(x, 5) - std::pow(y, 5)) / 5 + 2 * (std::pow(x, 3) - std::pow(y, 3)) / 3 + x - y;
        },
        [](double x, double y) { return 2 * (std::pow(x, 4) + std::pow(y, 4)) - 4 * (x * x + y * y); }};
    CHECK(coeff_a(1, 1, 0, builtin("ex2")) == doctest::Approx(-2.0 / 3).epsilon(1e-13));
    check_table("ex2", t, 1.0, 0.0, 1e-12);
    check_table("ex2", t, 1.3, -0.4, 1e-12);
  }

  TEST_CASE("example 3 and 4 coefficients") {
    const std::vector<Coeff> t3{
        [](double x, double y) { return -0.5 * (std::exp(x) - std::exp(y)) + (std::exp(2 * x) - std::exp(2 * y)) / 8; },
        [](double x, double y) { return 0.5 * (std::exp(x) + std::exp(y)) - 0.25 * (std::exp(2 * x) + std::exp(2 * y)); },
        [](double x, double y) {
          auto d = [&](double m) { return std::exp(m * x) - std::exp(m * y); };
          return -0.5 * d(1) + 3.0 / 8 * d(2) + d(3) / 12 - d(4) / 64;
        }};
    check_table("ex3", t3, 0.8, -0.5, 1e-11);
    auto sech2 = [](double z) { return 1 / (std::cosh(z) * std::cosh(z)); };
    const std::vector<Coeff> t4{
        [](double x, double y) { return x - y - 2 * (std::tanh(x) - std::tanh(y)); },
        [=](double x, double y) {
          return sech2(x) + sech2(y) - std::tanh(x) * std::tanh(x) - std::tanh(y) * std::tanh(y);
        },
        [=](double x, double y) {
          return -x + y + 4.0 / 3 * (std::tanh(x) - std::tanh(y)) +
                 8.0 / 3 * (sech2(x) * std::tanh(x) - sech2(y) * std::tanh(y));
        }};
    check_table("ex4", t4, 0.5, 0.0, 1e-11);
    check_table("ex4", t4, 1.7, -0.9, 1e-11);
  }

  TEST_CASE("example 5 jump contributions") {
    const PotentialSpec s = builtin("ex5");
    CHECK(coeff_a(1, 1.0, -0.5, s) == doctest::Approx(1.5 - 2).epsilon(1e-12));
    CHECK(coeff_a(2, 1.0, -0.5, s) == doctest::Approx(-2).epsilon(1e-14));
    const ExpansionSeries es = make_expansion(s, 1.0, -0.5, 2);
    CHECK(es.coefficient(2) == doctest::Approx(0).scale(1));
    REQUIRE(es.corrections.size() == 1);
    CHECK_THROWS_AS(make_expansion(s, 1.0, -0.5, 3), CapError);
    ExpansionOptions force;
    force.force = true;
    CHECK_THROWS_AS(make_expansion(s, 1.0, -0.5, 3, force), DistributionProductError);
    // both points on one side: no delta, a_1 = x - y
    CHECK(coeff_a(1, 2.0, 0.5, s) == doctest::Approx(1.5).epsilon(1e-12));
  }

  TEST_CASE("example 6 coefficients") {
    const std::vector<Coeff> t{
        [](double x, double y) { return (-std::exp(2 * y) + 4 * std::exp(y) + 2 * x - 3) / 8; },
        [](double, double y) { return -0.25 * (std::exp(2 * y) - 2 * std::exp(y) + 1); },
        [](double x, double y) {
          return (3 * std::exp(4 * y) - 16 * std::exp(3 * y) - 72 * std::exp(2 * y) + 96 * std::exp(y) - 12 * x - 11) /
                 192;
        },
        [](double, double y) {
          return (std::exp(4 * y) - 4 * std::exp(3 * y) - 4 * std::exp(2 * y) + 4 * std::exp(y) + 1) / 8;
        }};
    check_table("ex6", t, 0.5, -1.0, 1e-12);
    check_table("ex6", t, 2.0, -0.3, 1e-12);
    CHECK(coeff_a(2, 0.5, -1, builtin("ex6")) == doctest::Approx(-0.25 * (1 / (e * e) - 2 / e + 1)).epsilon(1e-13));
    CHECK(coeff_a(2, 0.5, -1, builtin("ex6")) == doctest::Approx(-0.0998941).epsilon(1e-6));
    const std::vector<Coeff> right{[](double x, double y) { return (x - y) / 4; }, [](double, double) { return -0.5; },
                                   [](double x, double y) { return -(x - y) / 16; }};
    check_table("ex6", right, 2.0, 1.0, 1e-12);
    const ExpansionSeries es = make_expansion(builtin("ex6"), 0.5, -1, 4);
    CHECK(es.coefficient(4) - es.a[4] == doctest::Approx(-0.125));
  }

  TEST_CASE("example 7 and 8 coefficients") {
    const std::vector<Coeff> t7{
        [](double x, double y) {
          return (std::log(1 + x) + std::log(1 - y)) / 16 - 0.25 * (1 / std::sqrt(1 + x) - 1 / std::sqrt(1 - y));
        },
        [](double x, double y) {
          return -(1 / (1 + x) + 1 / (1 - y)) / 16 - (std::pow(1 + x, -1.5) - std::pow(1 - y, -1.5)) / 8;
        }};
    check_table("ex7", t7, 0.5, -0.5, 1e-12);
    check_table("ex7", t7, 3.0, -0.2, 1e-12);
    const std::vector<Coeff> t8{
        [](double x, double y) { return 0.5 * (x * x + y * y); }, [](double x, double y) { return -x + y; },
        [](double x, double y) { return 2 - (x * x * x - y * y * y) / 3; },
        [](double x, double y) { return 2 * (x * x + y * y); },
        [](double x, double y) { return 0.5 * (std::pow(x, 4) + std::pow(y, 4)) - 5 * (x - y); },
        [](double x, double y) { return -16.0 / 3 * (std::pow(x, 3) - std::pow(y, 3)) + 10; }};
    check_table("ex8", t8, 1.0, -1.0, 1e-12);
    check_table("ex8", t8, 0.4, -2.2, 1e-12);
    const ExpansionSeries es = make_expansion(builtin("ex8"), 1.0, -1.0, 6);
    CHECK(es.coefficient(6) - es.a[6] == doctest::Approx(2));
  }

  TEST_CASE("odd coefficients antisymmetric, even symmetric") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    for (const char* name : {"ex1", "ex2", "ex3", "ex4", "ex6", "ex7"}) {
      const PotentialSpec s = builtin(name);
      for (int i = 0; i < 3; ++i) {
        const double x = u(rng), y = u(rng);
        for (int n = 1; n <= (s.jumps.empty() ? 5 : 4); ++n) {
          CAPTURE(name);
          CAPTURE(n);
          const double a = coeff_a(n, x, y, s), b = coeff_a(n, y, x, s);
          CHECK(close(a, n % 2 ? -b : b, 1e-11, 1e-11));
        }
      }
    }
  }

  TEST_CASE("even coefficients match the integral of s_{n+1}") {
    for (const char* name : {"ex1", "ex2", "ex3", "ex4"}) {
      const PotentialSpec s = builtin(name);
      const double x = 1.1, y = -0.6;
      for (int n = 2; n <= 10; n += 2) {
        CAPTURE(name);
        CAPTURE(n);
        QuadratureOptions q;
        q.abs_tol = q.rel_tol = 1e-12;
        const double diff = integrate([&](double z) { return eval_s(n + 1, z, s); }, y, x, {}, q).value;
        const double twice_y = coeff_a(n, y, y, s);
        CHECK(close(coeff_a(n, x, y, s), diff + twice_y, 1e-8, 1e-8));
      }
    }
  }

  TEST_CASE("F and V_S bases agree") {
    ExpansionOptions vs;
    vs.basis = Basis::VS;
    for (const char* name : {"ex1", "ex2", "ex3", "ex4"}) {
      const PotentialSpec s = builtin(name);
      for (int n = 1; n <= 8; ++n) {
        CAPTURE(name);
        CAPTURE(n);
        CHECK(close(coeff_a(n, 0.9, -0.4, s), coeff_a(n, 0.9, -0.4, s, vs), 1e-9, 1e-12));
      }
    }
    CHECK_THROWS_AS(coeff_a(1, 1, -1, builtin("ex5"), vs), PotentialError);
  }

  TEST_CASE("log G and G partial sums") {
    const PotentialSpec ex1 = builtin("ex1");
    const ExpansionSeries s1 = make_expansion(ex1, 1, 0, 4);
    const cplx k(0, 3);
    const LogGResult r = logG_series(s1, k);
    const cplx w = 1.0 / (2.0 * cplx(0, 1) * k);
    CHECK(std::abs(r.log_G - (cplx(0, 1) * k + w - 2.0 * w * w - w * w * w + 4.0 * w * w * w * w)) < 1e-14);
    CHECK(std::abs(r.log_GS - (r.log_G - std::log(2.0 * cplx(0, 1) * k))) < 1e-14);
    REQUIRE(r.log_GF);
    CHECK(std::abs(*r.log_GF - (cplx(0, std::numbers::pi) - 1.0 + r.log_GS)) < 1e-14);
    const auto b = b_coefficients(s1);
    CHECK(b[1] == s1.a[1]);
    CHECK(b[2] == doctest::Approx(-1.5));

    const PotentialSpec zero = make_potential(PotentialMode::FGiven, "0");
    const ExpansionSeries s0 = make_expansion(zero, 2, -1, 6);
    CHECK(logG_series(s0, cplx(2, 1)).log_G == cplx(0, 1) * cplx(2, 1) * 3.0);
    CHECK(std::abs(G_series(s0, cplx(2, 1)) - std::exp(cplx(0, 1) * cplx(2, 1) * 3.0)) < 1e-15);

    CHECK_THROWS_AS(logG_series(s1, cplx(0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(logG_series(s1, cplx(1, -0.1)), std::invalid_argument);
  }

  TEST_CASE("regime caps gate the partial sums") {
    const ExpansionSeries s2 = make_expansion(builtin("ex2"), 1, 0, 2);
    CHECK_THROWS_AS(logG_series(s2, cplx(5, 0)), CapError);
    CHECK_NOTHROW(logG_series(s2, cplx(5, 5)));
    ExpansionOptions force;
    force.force = true;
    const ExpansionSeries f2 = make_expansion(builtin("ex2"), 1, 0, 2, force);
    CHECK(logG_series(f2, cplx(5, 0)).beyond_cap);
    // ex6 with 0 < y < x: only N <= 1 on the real axis
    const ExpansionSeries s6 = make_expansion(builtin("ex6"), 2, 1, 3);
    CHECK_NOTHROW(logG_series(s6, cplx(3, 1)));
    CHECK_THROWS_AS(logG_series(s6, cplx(3, 0)), CapError);
    CHECK_THROWS_AS(make_expansion(builtin("ex6"), 0.5, -1, 5), CapError);
  }

  TEST_CASE("G series is the re-expanded exponential of the log series") {
    for (const char* name : {"ex1", "ex2", "ex3", "ex4"}) {
      const PotentialSpec s = builtin(name);
      const ExpansionSeries es = make_expansion(s, 0.7, -0.3, 6);
      // independent route: exponential of the truncated series in w
      Taylor<double> A(6);
      for (int n = 1; n <= 6; ++n) A[static_cast<std::size_t>(n)] = es.coefficient(n);
      const Taylor<double> B = taylor::exp(A);
      const auto b = b_coefficients(es);
      for (int n = 1; n <= 6; ++n) {
        CAPTURE(name);
        CAPTURE(n);
        CHECK(close(b[static_cast<std::size_t>(n)], B[static_cast<std::size_t>(n)], 1e-12, 1e-13));
      }
      // the gap to exp(log series) is O(1/k^(N+1)) or smaller
      for (int N = 1; N <= 6; ++N) {
        ExpansionSeries t = es;
        t.order = N;
        t.a.resize(static_cast<std::size_t>(N) + 1);
        auto gap = [&](double mag) {
          const cplx k = std::polar(mag, std::numbers::pi / 4);
          return std::abs(G_series(t, k) - std::exp(logG_series(t, k).log_G)) / std::abs(std::exp(logG_series(t, k).log_G));
        };
        const double ratio = gap(12) / gap(24);
        CAPTURE(N);
        CHECK(ratio > std::pow(2.0, N + 1) * 0.6);
      }
    }
  }

  TEST_CASE("short-time coefficients") {
    const ShortTimeSeries s1 = make_shorttime(builtin("ex1"), 1.0, 0.0, 6);
    double fact = 1;
    for (int n = 1; n <= 6; ++n) {
      fact *= n;
      CHECK(s1.g[static_cast<std::size_t>(n)] == doctest::Approx((n % 2 ? -1 : 1) / fact).epsilon(1e-10));
    }
    CHECK(s1.policy == DiagonalPolicy::Direct);
    const PotentialSpec ex2 = builtin("ex2");
    CHECK(make_shorttime(ex2, 1, 0, 1).g[1] == doctest::Approx(2.0 / 3).epsilon(1e-12));
    for (double x : {-1.0, 0.5, 2.0})
      for (double y : {-1.5, 0.25, 1.0}) {
        if (x == y) continue;
        const double sxy = x * x + x * y + y * y;
        const ShortTimeSeries st = make_shorttime(ex2, x, y, 3);
        CHECK(st.g[1] == doctest::Approx(1 - sxy / 3).epsilon(1e-10));
        CHECK(st.g[2] == doctest::Approx(1.0 / 6 - sxy / 3 + sxy * sxy / 18).epsilon(1e-9));
        CHECK(st.g[3] == doctest::Approx(-1.0 / 6 + x * y / 15 + sxy / 30 + sxy * sxy / 18 - sxy * sxy * sxy / 162)
                             .epsilon(1e-8));
      }
    CHECK(shorttime_GF(1, 0, 1e-4, 2, ex2) < 1e-300);
    CHECK_THROWS_AS(make_shorttime(builtin("ex8"), 1, 0, 2), PotentialError);
    CHECK_THROWS_AS(make_shorttime(ex2, 1, 0, 2).value(0), std::invalid_argument);
  }

  TEST_CASE("short-time coefficients near the diagonal") {
    for (const char* name : {"ex1", "ex2", "ex3", "ex4"}) {
      const PotentialSpec s = builtin(name);
      const double c = 0.4;
      const ShortTimeSeries diag = make_shorttime(s, c, c, 3);
      CHECK(diag.policy == DiagonalPolicy::Diagonal);
      const ShortTimeSeries near = make_shorttime(s, c + 5e-4, c - 5e-4, 3);
      CHECK(near.policy == DiagonalPolicy::TaylorX);
      for (int n = 1; n <= 3; ++n) {
        CAPTURE(name);
        CAPTURE(n);
        const auto u = static_cast<std::size_t>(n);
        CHECK(close(near.g[u], diag.g[u], 1e-4, 1e-10));
      }
      // the Taylor route and the direct route overlap at moderate separation
      ExpansionOptions direct;
      direct.near_diag = 0;
      const ShortTimeSeries t = make_shorttime(s, c + 0.2, c - 0.2, 3);
      const ShortTimeSeries d = make_shorttime(s, c + 0.2, c - 0.2, 3, direct);
      CHECK(t.policy == DiagonalPolicy::TaylorX);
      CHECK(d.policy == DiagonalPolicy::Direct);
      for (int n = 1; n <= 3; ++n) CHECK(close(t.g[static_cast<std::size_t>(n)], d.g[static_cast<std::size_t>(n)], 1e-5, 1e-8));
    }
  }
}
