#include <cmath>
#include <numbers>
#include <sstream>

#include "asymgreen/parallel.hpp"
#include "asymgreen/remainder.hpp"
#include "doctest.h"

using namespace asymgreen;

TEST_SUITE("remainder") {
  TEST_CASE("rays") {
    CHECK(Ray::parse("real").kind == Ray::Kind::Real);
    const Ray s = Ray::parse("sector:0.5");
    CHECK(s.kind == Ray::Kind::Sector);
    CHECK(std::abs(std::arg(s.at(3)) - 0.5) < 1e-15);
    CHECK(std::abs(std::abs(s.at(3)) - 3) < 1e-15);
    const Ray b = Ray::parse("imline:1");
    CHECK(b.at(2).imag() == 1);
    CHECK(std::abs(std::abs(b.at(2)) - 2) < 1e-15);
    CHECK(b.regime() == Regime::HalfPlane);
    CHECK(Ray::parse(s.to_string()).param == 0.5);
    CHECK_THROWS_AS(Ray::parse("sector:4"), std::invalid_argument);
    CHECK_THROWS_AS(Ray::parse("imline:-1"), std::invalid_argument);
    CHECK_THROWS_AS(Ray::parse("diagonal"), std::invalid_argument);
    CHECK_THROWS_AS(b.at(0.5), std::invalid_argument);

    const auto m = linear_moduli(2, 4, 5);
    CHECK(m.size() == 5);
    CHECK(m[1] == 2.5);
    CHECK(m.back() == 4);
  }

  TEST_CASE("trend classifier") {
    std::vector<double> k, decay, flat, grow;
    for (int i = 0; i < 40; ++i) {
      const double kk = 4 + i;
      k.push_back(kk);
      decay.push_back((1.5 + std::sin(3 * kk)) / kk);
      flat.push_back(0.25 + 0.1 * std::cos(5 * kk) / kk);
      grow.push_back(kk * (1.2 + std::sin(kk)));
    }
    double slope = 0;
    CHECK(classify_trend(k, decay, &slope) == Trend::Vanishing);
    CHECK(slope < -0.5);
    CHECK(classify_trend(k, flat) == Trend::FiniteLimit);
    CHECK(classify_trend(k, grow) == Trend::Divergent);
    CHECK(classify_trend({1, 2}, {1, 2}) == Trend::Undetermined);
  }

  TEST_CASE("free potential has no remainder") {
    RemainderOptions opt;
    const auto r = remainder_report(make_potential(PotentialMode::FGiven, "0"), 1, 0, 3, Ray::parse("sector:1"),
                                    linear_moduli(2, 10, 5), opt);
    for (const auto& s : r.samples) {
      CHECK(s.ok);
      CHECK(std::abs(s.delta) < 1e-13);
    }
  }

  TEST_CASE("parallel sweep equals the serial reference") {
    RemainderOptions opt;
    opt.example = "ex4";
    opt.threads = 3;
    const PotentialSpec s = builtin("ex4");
    const auto moduli = linear_moduli(3, 12, 12);
    const Ray ray = Ray::parse("imline:0.5");
    const auto par = remainder_report(s, 0.5, 0, 4, ray, moduli, opt);
    const auto ser = remainder_report_serial(s, 0.5, 0, 4, ray, moduli, opt);
    REQUIRE(par.samples.size() == ser.samples.size());
    for (std::size_t i = 0; i < par.samples.size(); ++i) {
      CHECK(par.samples[i].k == ser.samples[i].k);
      CHECK(par.samples[i].delta == ser.samples[i].delta);
    }
    CHECK(remainder_csv(par) == remainder_csv(ser));
    CHECK(par.trend == ser.trend);
  }

  TEST_CASE("example 1 along the sector vanishes") {
    RemainderOptions opt;
    opt.example = "ex1";
    const auto r = remainder_report(builtin("ex1"), 0.5, 0, 8, Ray{Ray::Kind::Sector, std::numbers::pi / 4},
                                    linear_moduli(2, 16, 30), opt);
    CHECK(r.trend == Trend::Vanishing);
    CHECK(r.samples.front().used == Reference::Exact);
    // closed form and Riccati oracle give the same remainder
    opt.reference = Reference::Oracle;
    const auto o = remainder_report(builtin("ex1"), 0.5, 0, 8, Ray{Ray::Kind::Sector, std::numbers::pi / 4},
                                    linear_moduli(2, 16, 30), opt);
    for (std::size_t i = 0; i < r.samples.size(); ++i) CHECK(std::abs(r.samples[i].delta - o.samples[i].delta) < 1e-10);
  }

  TEST_CASE("csv layout and failed samples") {
    RemainderOptions opt;
    opt.reference = Reference::Exact;
    opt.example = "ex4";
    // the 2F1 closed form is refused at large |k|: those rows carry nan
    const auto r = remainder_report(builtin("ex4"), 0.5, 0, 2, Ray::parse("real"), {2.0, 400.0}, opt);
    CHECK(r.samples[0].ok);
    CHECK_FALSE(r.samples[1].ok);
    const std::string csv = remainder_csv(r);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "k_re,k_im,abs_kN_DeltaN,re_Delta,im_Delta");
    std::getline(in, line);
    CHECK(line.rfind("2,0,", 0) == 0);
    std::getline(in, line);
    CHECK(line == "400,0,nan,nan,nan");
    CHECK_THROWS_AS(remainder_report(builtin("ex4"), 0.5, 0, 2, Ray::parse("real"), {3.0, 2.0}, opt),
                    std::invalid_argument);
  }

  TEST_CASE("thread count resolution") {
    CHECK(resolve_threads(5) == 5);
    CHECK(resolve_threads() >= 1);
  }
}
