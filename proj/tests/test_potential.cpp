#include <cmath>
#include <random>

#include "asymgreen/expr.hpp"
#include "asymgreen/potential.hpp"
#include "asymgreen/validity.hpp"
#include "doctest.h"

using namespace asymgreen;

namespace {

Expr random_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  std::uniform_real_distribution<double> val(-5, 5);
  switch (pick(rng)) {
    case 0: return ex::constant(std::round(val(rng) * 1000) / 1000);
    case 1: return ex::var();
    case 2: return ex::add(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 3: return ex::sub(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 4: return ex::mul(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 5: return ex::div(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 6: {
      Expr a = random_expr(rng, depth - 1);
      return ex::neg(a);
    }
    case 7: return ex::pow(random_expr(rng, depth - 1), std::uniform_int_distribution<int>(-3, 4)(rng));
    default: {
      const Fn fns[] = {Fn::Exp, Fn::Log, Fn::Sqrt, Fn::Sin, Fn::Cos, Fn::Sinh, Fn::Cosh, Fn::Tanh, Fn::Sech};
      return ex::call(fns[std::uniform_int_distribution<int>(0, 8)(rng)], random_expr(rng, depth - 1));
    }
  }
}

double richardson(const Expr& g, double z, double h) {
  auto d = [&](double hh) { return (evaluate(g, z + hh) - evaluate(g, z - hh)) / (2 * hh); };
  return (4 * d(h / 2) - d(h)) / 3;
}

}  // namespace

TEST_SUITE("potential") {
  TEST_CASE("parse examples") {
    Expr e = parse_expr("-tanh(z)");
    REQUIRE(e->kind == NodeKind::Neg);
    CHECK(e->lhs->kind == NodeKind::Call);
    CHECK(e->lhs->fn == Fn::Tanh);
    CHECK(evaluate(e, 0.7) == doctest::Approx(-std::tanh(0.7)).epsilon(1e-15));
    Expr zero = parse_expr("0");
    CHECK(zero->kind == NodeKind::Const);
    CHECK(zero->value == 0);
    Piecewise pw = parse_piecewise("piecewise((z<0, -exp(z)/2), (z>=0, -1/2))");
    REQUIRE(pw.pieces().size() == 2);
    CHECK(pw.breakpoints() == std::vector<double>{0.0});
    CHECK(pw(-1.0) == doctest::Approx(-std::exp(-1.0) / 2));
    CHECK(pw(0.0) == -0.5);
    CHECK(pw(0.0, -1) == doctest::Approx(-0.5));
    CHECK(pw(3.0) == -0.5);
  }

  TEST_CASE("precedence and literals") {
    CHECK(evaluate(parse_expr("2 + 3*z^2"), 2) == 14);
    CHECK(evaluate(parse_expr("-2^2"), 0) == -4);
    CHECK(evaluate(parse_expr("(-2)^2"), 0) == 4);
    CHECK(evaluate(parse_expr("1/2/4"), 0) == 0.125);
    CHECK(evaluate(parse_expr("z^-2"), 2) == 0.25);
    CHECK(evaluate(parse_expr("1e-3*z"), 2) == 0.002);
    CHECK(parse_expr("-3")->kind == NodeKind::Const);
  }

  TEST_CASE("parse errors carry positions") {
    try {
      parse_expr("1 + foo(z)");
      FAIL("expected error");
    } catch (const ParseError& e) {
      CHECK(e.position == 4);
      CHECK(std::string(e.what()).find("unknown function") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_expr("2 *"), ParseError);
    CHECK_THROWS_AS(parse_expr("z^1.5"), ParseError);
    CHECK_THROWS_AS(parse_expr("x + 1"), ParseError);
    CHECK_THROWS_AS(parse_piecewise("piecewise((z<0, 1))"), PotentialError);
    CHECK_THROWS_AS(parse_piecewise("piecewise((x<0, 1), (z>=0, 2))"), ParseError);
  }

  TEST_CASE("first-match piecewise semantics") {
    Piecewise pw = parse_piecewise("piecewise((z<-1, 1), (z<2, 2), (z>=-5, 3))");
    REQUIRE(pw.pieces().size() == 3);
    CHECK(pw(-3) == 1);
    CHECK(pw(0) == 2);
    CHECK(pw(2) == 3);
    CHECK(pw.breakpoints() == std::vector<double>{-1.0, 2.0});
  }

  TEST_CASE("print/parse round trip on generated corpus") {
    std::mt19937 rng(20240611);
    for (int i = 0; i < 50; ++i) {
      Expr e = random_expr(rng, 4);
      const std::string text = print(e);
      CAPTURE(text);
      Expr back = parse_expr(text);
      CHECK(structurally_equal(e, back));
      CHECK(print(back) == text);
    }
    Piecewise pw = parse_piecewise("piecewise((z<-0.5, exp(z)), (z<1, z^3), (z>=1, 1))");
    Piecewise back = parse_piecewise(pw.to_string());
    CHECK(back.to_string() == pw.to_string());
  }

  TEST_CASE("differentiate examples") {
    Expr g = parse_expr("-exp(z)/2");
    Expr dg = differentiate(g);
    for (double z : {-1.0, 0.0, 0.8}) CHECK(evaluate(dg, z) == doctest::Approx(-std::exp(z) / 2).epsilon(1e-14));
    Expr t = parse_expr("-tanh(z)");
    const double s = 1 / std::cosh(1.0);
    CHECK(evaluate(differentiate(t, 2), 1.0) == doctest::Approx(2 * std::tanh(1.0) * s * s).epsilon(1e-13));
    CHECK(richardson(differentiate(t, 1), 1.0, 1e-4) == doctest::Approx(2 * std::tanh(1.0) * s * s).epsilon(1e-8));
    CHECK_THROWS_AS(differentiate(t, 15), std::out_of_range);
    // piecewise derivative acts piece by piece
    Piecewise pw = parse_piecewise("piecewise((z<0, -exp(z)/2), (z>=0, -1/2))");
    Piecewise d = pw.transform([](const Expr& e) { return differentiate(e); });
    CHECK(d(-0.3) == doctest::Approx(-std::exp(-0.3) / 2));
    CHECK(d(0.3) == 0);
  }

  TEST_CASE("symbolic derivatives agree with finite differences and jets") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (const auto& name : builtin_names()) {
      const PotentialSpec spec = builtin(name);
      const Piecewise& g = spec.basis_function();
      for (int probe = 0; probe < 10; ++probe) {
        double z = u(rng);
        if (std::abs(z) < 1e-2) z += 0.1;
        const Expr& e = g.pieces()[g.locate(z)].expr;
        const auto jets = derivatives(e, z, 6);
        for (int n = 1; n <= 6; ++n) {
          CAPTURE(name);
          CAPTURE(z);
          CAPTURE(n);
          const double sym = evaluate(differentiate(e, n), z);
          const double fd = richardson(differentiate(e, n - 1), z, 1e-4);
          CHECK(std::abs(sym - fd) <= 1e-6 * std::max(1.0, std::abs(sym)));
          CHECK(std::abs(sym - jets[static_cast<std::size_t>(n)]) <= 1e-10 * std::max(1.0, std::abs(sym)));
        }
      }
    }
  }

  TEST_CASE("Taylor jets for large arguments stay finite") {
    auto d = derivatives(parse_expr("tanh(z)"), 800, 5);
    CHECK(d[0] == 1);
    for (int j = 1; j <= 5; ++j) CHECK(d[static_cast<std::size_t>(j)] == 0);
    CHECK(std::isfinite(derivatives(parse_expr("sech(z)^2"), -900, 4)[3]));
  }

  TEST_CASE("derive_links") {
    PotentialSpec ex2 = builtin("ex2");
    for (double z : {-1.5, 0.0, 2.0}) {
      CHECK((*ex2.f)(z) == doctest::Approx(-z));
      CHECK((*ex2.vs)(z) == doctest::Approx(z * z - 1));
    }
    PotentialSpec c = make_potential(PotentialMode::FGiven, "-1");
    CHECK((*c.vs)(0.3) == 1);
    PotentialSpec zero = make_potential(PotentialMode::FGiven, "0");
    CHECK((*zero.vs)(0.3) == 0);
    CHECK(zero.delta_V(2, -1) == 0);
    CHECK(c.delta_V(1.5, 0.5) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(ex2.delta_V(1, 0) == 1);
    CHECK_THROWS_AS(builtin("ex8").delta_V(1, 0), PotentialError);
    CHECK_THROWS_AS(make_potential(PotentialMode::VGiven, "piecewise((z<0, 0), (z>=0, 1))"), PotentialError);
  }

  TEST_CASE("detect_jumps reproduces the builtin jump records") {
    struct Want {
      const char* name;
      int order;
      double c;
    };
    for (const Want& w : {Want{"ex5", 0, -2}, Want{"ex6", 1, 0.5}, Want{"ex7", 1, 0.25}, Want{"ex8", 2, 2}}) {
      CAPTURE(w.name);
      PotentialSpec s = builtin(w.name);
      REQUIRE(s.jumps.size() == 1);
      CHECK(s.jumps[0].location == 0);
      CHECK(s.jumps[0].order == w.order);
      CHECK(s.jumps[0].magnitude == doctest::Approx(w.c).epsilon(1e-12));
      for (const auto& n : s.notes) CHECK(n.find("warning") == std::string::npos);
    }
    for (const char* smooth : {"ex1", "ex2", "ex3", "ex4"}) CHECK(builtin(smooth).jumps.empty());
  }

  TEST_CASE("declared jump reconciliation") {
    PotentialSpec s;
    s.mode = PotentialMode::FGiven;
    s.given = parse_piecewise("piecewise((z<0, 0), (z>=0, 1))");
    s.declared_jumps = {{0, 1, 1}};
    CHECK_THROWS_AS(finalize_potential(s), PotentialError);
    s.declared_jumps = {{0, 0, 3}};
    PotentialSpec ok = finalize_potential(s);
    REQUIRE(ok.jumps.size() == 1);
    CHECK(ok.jumps[0].magnitude == 1);
    bool warned = false;
    for (const auto& n : ok.notes) warned = warned || n.find("detection wins") != std::string::npos;
    CHECK(warned);
    s.declared_jumps = {{0.5, 0, 1}};
    CHECK_THROWS_AS(finalize_potential(s), PotentialError);
    // a smooth join is not a jump
    PotentialSpec smooth = make_potential(PotentialMode::FGiven, "piecewise((z<0, z), (z>=0, z))");
    CHECK(smooth.jumps.empty());
    CHECK(smooth.smooth_joins == std::vector<double>{0.0});
  }

  TEST_CASE("tail classification heuristic") {
    auto tail = [](const char* e, int side) { return classify_tail(parse_piecewise(e), side); };
    CHECK(tail("-tanh(z)", +1).kind == TailKind::FiniteLimit);
    CHECK(tail("-tanh(z)", +1).limit == doctest::Approx(-1));
    CHECK(tail("-exp(z)/2", -1).kind == TailKind::DecaysToZero);
    CHECK(tail("-exp(z)/2", +1).kind == TailKind::DivergesOther);
    CHECK(tail("-z", +1).kind == TailKind::DivergesSubexponential);
    CHECK(tail("1/sqrt(1 + z^2)", -1).kind == TailKind::DecaysToZero);
    CHECK(tail("piecewise((z<0, 3), (z>=0, z))", -1).how == "symbolic");
    CHECK(tail("1 + 1/z", +1).kind == TailKind::FiniteLimit);
    CHECK(builtin("ex3").tail_plus.kind == TailKind::DivergesOther);
    CHECK(builtin("ex4").tail_minus.limit == 1);
  }

  TEST_CASE("potential file format") {
    PotentialSpec s = parse_potential_file_text(
        "# ex6 again\nmode = V\npieces = piecewise((z<0, exp(z)), (z>=0, 1 + z))\njumps = 0:1:0.5\n"
        "monotone_tails = true\n");
    CHECK(s.mode == PotentialMode::VGiven);
    REQUIRE(s.jumps.size() == 1);
    CHECK(s.jumps[0].order == 1);
    CHECK(s.monotone_tails);
    PotentialSpec v = parse_potential_file_text("mode = VS\nexpr = piecewise((z<0, -z), (z>=0, z))\nE0 = 1.0188\n");
    CHECK(v.mode == PotentialMode::VSGiven);
    CHECK(v.e0 == 1.0188);
    CHECK(v.jumps[0].order == 2);
    CHECK_THROWS_AS(parse_potential_file_text("mode = V\n"), PotentialError);
    CHECK_THROWS_AS(parse_potential_file_text("expr = z\ncolour = red\n"), PotentialError);
  }
}

TEST_SUITE("validity") {
  TEST_CASE("documented caps") {
    auto cap = [](const char* name, double x, double y, Regime r) {
      return classify_validity(builtin(name), x, y).get(r).cap;
    };
    // ex6 straddling the jump: N <= 3, -C^2/2 at order 4
    ValidityReport r6 = classify_validity(builtin("ex6"), 0.5, -1);
    CHECK(r6.real_axis.cap.to_string() == "3");
    REQUIRE(r6.real_axis.corrections.size() == 1);
    CHECK(r6.real_axis.corrections[0].order == 4);
    CHECK(r6.real_axis.corrections[0].value == doctest::Approx(-0.125));
    CHECK(cap("ex6", 2, 1, Regime::RealAxis).to_string() == "1");
    CHECK(cap("ex6", 2, 1, Regime::Sector).to_string() == "unbounded");
    CHECK(cap("ex2", 1, 0, Regime::Sector).to_string() == "unbounded");
    CHECK(cap("ex2", 1, 0, Regime::HalfPlane).to_string() == "unbounded");
    CHECK(cap("ex2", 1, 0, Regime::RealAxis).to_string() == "invalid");
    CHECK(cap("ex3", 0.8, 0, Regime::Sector).to_string() == "unbounded");
    CHECK(cap("ex3", 0.8, 0, Regime::HalfPlane).to_string() == "invalid");
    CHECK(cap("ex3", 0.8, 0, Regime::RealAxis).to_string() == "invalid");
    CHECK(cap("ex1", 1, 0, Regime::RealAxis).to_string() == "unbounded");
    CHECK(cap("ex4", 0.5, 0, Regime::RealAxis).to_string() == "unbounded");
    ValidityReport r5 = classify_validity(builtin("ex5"), 1, -1);
    CHECK(r5.real_axis.cap.to_string() == "1");
    CHECK(r5.real_axis.corrections[0].order == 2);
    CHECK(r5.real_axis.corrections[0].value == doctest::Approx(2));
    ValidityReport r7 = classify_validity(builtin("ex7"), 0.5, -0.5);
    CHECK(r7.real_axis.cap.to_string() == "3");
    CHECK(r7.real_axis.corrections[0].value == doctest::Approx(-1.0 / 32));
    ValidityReport r8 = classify_validity(builtin("ex8"), 1, -1);
    CHECK(r8.sector.cap.to_string() == "5");
    CHECK(r8.half_plane.cap.to_string() == "5");
    CHECK(r8.real_axis.cap.to_string() == "invalid");
    CHECK(r8.half_plane.corrections[0].order == 6);
    CHECK(r8.half_plane.corrections[0].value == doctest::Approx(2));
    CHECK_THROWS_AS(classify_validity(builtin("ex6"), 0, -1), std::invalid_argument);
    CHECK_THROWS_AS(classify_validity(builtin("ex6"), -1, 0.5), std::invalid_argument);
  }

  TEST_CASE("cap monotonicity on random geometries") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-3, 3);
    for (const auto& name : builtin_names()) {
      const PotentialSpec spec = builtin(name);
      for (int i = 0; i < 20; ++i) {
        double a = u(rng), b = u(rng);
        if (a == b) continue;
        ValidityReport r = classify_validity(spec, std::max(a, b), std::min(a, b));
        CAPTURE(name);
        CHECK(r.real_axis.cap <= r.half_plane.cap);
        CHECK(r.half_plane.cap <= r.sector.cap);
      }
    }
  }
}
