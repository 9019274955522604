// Unit tests of the potential models: parameter validation, accurate
// pointwise evaluation, the centrifugal approximation, and curve sampling.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "diracbound/potentials.hpp"

using namespace diracbound;
using potentials::Hellmann;
using potentials::PotentialSpec;
using potentials::Varshni;
using potentials::WeiHua;

TEST_CASE("names and screening parameter") {
  CHECK(potentials::name_of(Hellmann{1, 1, 1}) == "hellmann");
  CHECK(potentials::name_of(WeiHua{1, 0.5, 1}) == "weihua");
  CHECK(potentials::name_of(Varshni{1, 1, 1}) == "varshni");
  CHECK(potentials::beta_of(Hellmann{1, 1, 0.02}) == 0.02);
  CHECK(potentials::beta_of(WeiHua{1, 0.5, 0.01}) == 0.01);
  CHECK(potentials::beta_of(Varshni{1, 1, 0.001}) == 0.001);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(potentials::validate(Hellmann{1, 1, 0.0}), UsageError);
  CHECK_THROWS_AS(potentials::validate(Hellmann{1, 1, -2.0}), UsageError);
  CHECK_THROWS_AS(potentials::validate(WeiHua{1.0, 1.0, 0.5}), UsageError);
  CHECK_THROWS_AS(potentials::validate(WeiHua{0.0, 0.5, 0.5}), UsageError);
  CHECK_THROWS_AS(potentials::validate(WeiHua{-1.0, 0.5, 0.5}), UsageError);
  CHECK_NOTHROW(potentials::validate(WeiHua{1.0, 0.5, 0.5}));
  CHECK_NOTHROW(potentials::validate(Varshni{-1.0, -1.0, 0.5}));
}

TEST_CASE("construction from name and key=value parameters") {
  const auto h = potentials::make("hellmann", {{"a", 0.25}, {"b", 0.2}, {"beta", 0.02}});
  CHECK(std::get<Hellmann>(h).a == 0.25);
  CHECK(std::get<Hellmann>(h).b == 0.2);

  // The Wei Hua shape parameter travels under the key "a".
  const auto w = potentials::make("weihua", {{"D", 0.01}, {"a", 0.25}, {"beta", 0.1}});
  CHECK(std::get<WeiHua>(w).D == 0.01);
  CHECK(std::get<WeiHua>(w).a_shape == 0.25);

  const auto v = potentials::make("varshni", {{"a", 0.15}, {"b", 0.15}, {"beta", 0.001}});
  CHECK(std::get<Varshni>(v).beta == 0.001);

  CHECK_THROWS_AS(potentials::make("morse", {}), UsageError);
  CHECK_THROWS_AS(potentials::make("hellmann", {{"a", 1.0}, {"beta", 1.0}}),
                  UsageError);  // missing b
  CHECK_THROWS_AS(
      potentials::make("hellmann",
                       {{"a", 1.0}, {"b", 1.0}, {"beta", 1.0}, {"c", 1.0}}),
      UsageError);  // unknown key
  CHECK_THROWS_AS(
      potentials::make("weihua", {{"D", 1.0}, {"a", 1.0}, {"beta", 1.0}}),
      UsageError);  // shape parameter exactly 1
}

TEST_CASE("Hellmann evaluation") {
  const PotentialSpec spec = Hellmann{0.25, 0.20, 0.02};
  for (double r : {0.5, 1.0, 2.0, 10.0, 100.0}) {
    const double direct = -0.25 / r + (0.20 / r) * std::exp(-0.02 * r);
    CHECK(potentials::evaluate(spec, r) == Catch::Approx(direct).epsilon(1e-13));
  }
  // a == b: the r -> 0 limit is -a*beta, free of cancellation.
  const PotentialSpec eq = Hellmann{0.3, 0.3, 0.5};
  CHECK(potentials::evaluate(eq, 1e-9) == Catch::Approx(-0.15).epsilon(1e-6));
  // b == 0 reduces to the pure Coulomb term.
  const PotentialSpec coul = Hellmann{0.25, 0.0, 0.02};
  CHECK(potentials::evaluate(coul, 3.0) == Catch::Approx(-0.25 / 3.0).epsilon(1e-15));
}

TEST_CASE("Wei Hua evaluation and pole") {
  const PotentialSpec spec = WeiHua{0.01, 0.25, 0.10};
  for (double r : {0.5, 1.0, 5.0, 20.0}) {
    const double z = std::exp(-0.10 * r);
    const double q = (1.0 - z) / (1.0 - 0.25 * z);
    CHECK(potentials::evaluate(spec, r) ==
          Catch::Approx(0.01 * q * q).epsilon(1e-13));
  }
  // a_shape > 1 puts a pole at r = ln(a_shape)/beta.
  const PotentialSpec poled = WeiHua{1.0, 2.0, 1.0};
  CHECK_THROWS_AS(potentials::evaluate(poled, std::log(2.0)), Error);
  CHECK_NOTHROW(potentials::evaluate(poled, 2.0 * std::log(2.0)));
}

TEST_CASE("Varshni evaluation") {
  const PotentialSpec spec = Varshni{0.15, 0.15, 0.001};
  for (double r : {0.5, 1.0, 5.0, 50.0}) {
    const double direct = 0.15 * (1.0 - (0.15 / r) * std::exp(-0.001 * r));
    CHECK(potentials::evaluate(spec, r) == Catch::Approx(direct).epsilon(1e-13));
  }
  // Large r tends to the asymptotic value a.
  CHECK(potentials::evaluate(spec, 1e7) == Catch::Approx(0.15).epsilon(1e-9));
}

TEST_CASE("evaluation domain") {
  const PotentialSpec spec = Hellmann{1, 1, 1};
  CHECK_THROWS_AS(potentials::evaluate(spec, 0.0), UsageError);
  CHECK_THROWS_AS(potentials::evaluate(spec, -1.0), UsageError);
}

TEST_CASE("centrifugal approximation") {
  // beta^2/(1-e^{-beta r})^2 approaches 1/r^2 as beta r -> 0 and its relative
  // error is bounded by ~1.5 beta r on (0, 0.5] (full sweep in acceptance).
  const double beta = 0.02;
  for (double br : {0.001, 0.01, 0.1, 0.3, 0.5}) {
    const double r = br / beta;
    const double apx = potentials::centrifugal_approx(beta, r);
    const double exact = 1.0 / (r * r);
    const double rel = std::fabs(apx - exact) / exact;
    CHECK(rel <= 1.5 * br);
  }
  CHECK(potentials::centrifugal_approx(0.5, 1e-8) ==
        Catch::Approx(1.0 / (1e-8 * 1e-8)).epsilon(1e-6));
}

TEST_CASE("curve sampling") {
  const PotentialSpec spec = Varshni{0.15, 0.15, 0.001};
  const auto pts = potentials::curve(spec, 1.0, 5.0, 5);
  REQUIRE(pts.size() == 5);
  CHECK(pts.front().r == 1.0);
  CHECK(pts.back().r == 5.0);
  CHECK(pts[2].r == Catch::Approx(3.0).margin(1e-12));
  for (const auto& p : pts)
    CHECK(p.V == Catch::Approx(potentials::evaluate(spec, p.r)).epsilon(1e-15));

  CHECK_THROWS_AS(potentials::curve(spec, 0.0, 5.0, 5), UsageError);
  CHECK_THROWS_AS(potentials::curve(spec, 5.0, 1.0, 5), UsageError);
  CHECK_THROWS_AS(potentials::curve(spec, 1.0, 5.0, 1), UsageError);
}

TEST_CASE("curve annotates evaluation failures with the radius") {
  const PotentialSpec poled = WeiHua{1.0, 2.0, 1.0};
  // ln 2 lies inside [0.1, 2.1] with 201 samples (hits 0.6931.. closely only
  // if a node lands there); force the pole onto a node instead.
  const double pole = std::log(2.0);
  try {
    potentials::curve(poled, pole, pole + 1.0, 11);
    FAIL("expected a pole error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("while sampling curve") != std::string::npos);
  }
}

TEST_CASE("curve sampling is deterministic") {
  const PotentialSpec spec = Hellmann{0.25, 0.2, 0.02};
  const auto a = potentials::curve(spec, 0.5, 1500.0, 500);
  const auto b = potentials::curve(spec, 0.5, 1500.0, 500);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].r == b[i].r);
    CHECK(a[i].V == b[i].V);
  }
}
