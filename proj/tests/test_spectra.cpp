// Unit tests of the spectrum layer: the six closed-form eigenvalue
// expressions in both formula modes, the eps -> E level construction, the
// quantization-root search with its default bracket, root selection, and
// batch evaluation with per-row flags.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>

#include "diracbound/spectra.hpp"

using namespace diracbound;
using potentials::Hellmann;
using potentials::Varshni;
using potentials::WeiHua;
using reduction::QuantumNumbers;
using reduction::Symmetry;
using reduction::SymmetryCase;
using spectra::Mode;

namespace {

const Hellmann kHell{0.25, 0.20, 0.02};
const WeiHua kWei3{0.0001, 0.10, 0.01};
const WeiHua kWei4{0.01, 0.25, 0.10};
const Varshni kVar{0.15, 0.15, 0.001};

const SymmetryCase kHellSpin{Symmetry::spin, 10.0, 10.0};
const SymmetryCase kHellPseudo{Symmetry::pseudospin, 10.0, 10.0};
const SymmetryCase kWei3Spin{Symmetry::spin, 2.0, 0.001};
const SymmetryCase kWei4Pseudo{Symmetry::pseudospin, 10.0, 1.0};
const SymmetryCase kVarSpin{Symmetry::spin, 5.0, 5.0};
const SymmetryCase kVarPseudo{Symmetry::pseudospin, 5.0, 5.0};

}  // namespace

TEST_CASE("closed-form linear eigenvalues at the anchor levels") {
  CHECK(spectra::big_n(kHell, kHellSpin, {0, -2}, Mode::table_consistent) ==
        Catch::Approx(-4.70625e-3).margin(1e-15));
  CHECK(spectra::big_n(kHell, kHellSpin, {0, 1}, Mode::table_consistent) ==
        Catch::Approx(-4.425e-3).margin(1e-15));
  CHECK(spectra::big_n(kHell, kHellPseudo, {0, -2}, Mode::table_consistent) ==
        Catch::Approx(-5.90625e-3).margin(1e-15));
  CHECK(spectra::big_n(kWei3, kWei3Spin, {0, -2}, Mode::table_consistent) ==
        Catch::Approx(-6e-4).margin(1e-15));
  CHECK(spectra::big_n(kWei4, kWei4Pseudo, {0, 1}, Mode::table_consistent) ==
        Catch::Approx(-0.0525).margin(1e-15));
  CHECK(spectra::big_n(kVar, kVarSpin, {0, 1}, Mode::table_consistent) ==
        Catch::Approx(-9.30625e-5).margin(1e-15));
  CHECK(spectra::big_n(kVar, kVarPseudo, {0, -2}, Mode::table_consistent) ==
        Catch::Approx(1.484375e-6).margin(1e-18));
}

TEST_CASE("formula modes agree exactly where documented and differ elsewhere") {
  for (int n : {0, 1}) {
    for (int kappa : {-3, -2, 1, 2}) {
      const QuantumNumbers qn{n, kappa};
      // Screened Coulomb: identical in both modes, both symmetries.
      CHECK(spectra::big_n(kHell, kHellSpin, qn, Mode::as_printed) ==
            spectra::big_n(kHell, kHellSpin, qn, Mode::table_consistent));
      CHECK(spectra::big_n(kHell, kHellPseudo, qn, Mode::as_printed) ==
            spectra::big_n(kHell, kHellPseudo, qn, Mode::table_consistent));
      // Double-exponential well, spin: the corrected quadratic is a no-op.
      CHECK(spectra::big_n(kWei3, kWei3Spin, qn, Mode::as_printed) ==
            spectra::big_n(kWei3, kWei3Spin, qn, Mode::table_consistent));
      // Varshni spin: modes differ by exactly the constant a.
      CHECK(spectra::big_n(kVar, kVarSpin, qn, Mode::as_printed) -
                spectra::big_n(kVar, kVarSpin, qn, Mode::table_consistent) ==
            Catch::Approx(0.15).margin(1e-12));
    }
  }
  // Double-exponential pseudospin: the published bracket uses n^2 - kappa^2.
  CHECK(spectra::big_n(kWei4, kWei4Pseudo, {0, 1}, Mode::as_printed) ==
        Catch::Approx(-0.1125).margin(1e-15));
  CHECK(spectra::big_n(kWei4, kWei4Pseudo, {0, 1}, Mode::as_printed) !=
        spectra::big_n(kWei4, kWei4Pseudo, {0, 1}, Mode::table_consistent));
  // Varshni pseudospin: sign of the beta^2 kappa(kappa-1) term flips, and the
  // trailing +a is dropped, in the table-consistent variant.
  const double ap = spectra::big_n(kVar, kVarPseudo, {0, -2}, Mode::as_printed);
  CHECK(ap == Catch::Approx(-4.515625e-6 - 6e-6 + 0.15).margin(1e-15));
}

TEST_CASE("closed forms reject invalid quantum numbers") {
  CHECK_THROWS_AS(
      spectra::big_n(kHell, kHellSpin, {2, -2}, Mode::table_consistent),
      UsageError);
  CHECK_THROWS_AS(
      spectra::big_n(kHell, kHellSpin, {0, 0}, Mode::table_consistent),
      UsageError);
}

TEST_CASE("level construction selects the physical root") {
  const auto rp = reduction::reduce(kHell, kHellSpin, {0, -2});
  const auto lvl = spectra::level_from_eps(rp, -4.70625e-3,
                                           spectra::Method::closed_form,
                                           Mode::table_consistent);
  CHECK(lvl.selected == lvl.E_plus);
  CHECK_FALSE(lvl.selected_is_magnitude);
  CHECK(format_fixed(lvl.selected, 7) == "9.9995294");
  CHECK(lvl.E_minus < lvl.E_plus);

  const auto rpp = reduction::reduce(kHell, kHellPseudo, {0, -2});
  const auto lvp = spectra::level_from_eps(rpp, -5.90625e-3,
                                           spectra::Method::closed_form,
                                           Mode::table_consistent);
  CHECK(lvp.selected == Catch::Approx(std::fabs(lvp.E_minus)));
  CHECK(lvp.selected_is_magnitude);
  CHECK(format_fixed(lvp.selected, 7) == "9.9998031");
}

TEST_CASE("energy anchors of all six parameter sets") {
  auto E = [](const potentials::PotentialSpec& spec, const SymmetryCase& sym,
              int n, int kappa) {
    return format_fixed(
        spectra::energy_closed_form(spec, sym, {n, kappa}, Mode::table_consistent)
            .selected,
        7);
  };
  CHECK(E(kHell, kHellSpin, 0, -2) == "9.9995294");
  CHECK(E(kHell, kHellSpin, 0, 1) == "9.9995575");
  CHECK(E(kHell, kHellPseudo, 0, -2) == "9.9998031");
  CHECK(E(kHell, kHellPseudo, 0, 1) == "9.9997925");
  CHECK(E(kWei3, kWei3Spin, 0, -2) == "1.9986997");
  CHECK(E(kWei3, kWei3Spin, 0, 1) == "1.9963313");
  CHECK(E(kWei4, kWei4Pseudo, 0, -2) == "1.0049979");
  CHECK(E(kWei4, kWei4Pseudo, 0, 1) == "0.9956234");
  CHECK(E(kVar, kVarSpin, 0, -2) == "4.9999970");
  CHECK(E(kVar, kVarSpin, 0, 1) == "4.9999814");
  CHECK(E(kVar, kVarPseudo, 0, -2) == "5.0000001");
  CHECK(E(kVar, kVarPseudo, 0, 1) == "4.9999908");
}

TEST_CASE("level mode controls the eps shift in the energy map") {
  const auto rp = reduction::reduce(kVar, kVarSpin, {0, -2});
  const double eps = -1.5e-5;
  const auto tc = spectra::level_from_eps(rp, eps, spectra::Method::nu_rootfind,
                                          Mode::table_consistent);
  const auto ap = spectra::level_from_eps(rp, eps, spectra::Method::nu_rootfind,
                                          Mode::as_printed);
  // table_consistent: plain map P = eps; as_printed: P = eps + a.
  const auto [tm, tp] = reduction::energy_roots(rp.sym, eps);
  const auto [am, apn] = reduction::energy_roots(rp.sym, eps + 0.15);
  CHECK(tc.E_plus == Catch::Approx(tp).margin(1e-15));
  CHECK(ap.E_plus == Catch::Approx(apn).margin(1e-15));
}

TEST_CASE("default bracket encloses the quantization roots") {
  const auto rp = reduction::reduce(kHell, kHellSpin, {0, -2});
  const auto [lo, hi] = spectra::default_nu_bracket(rp);
  CHECK(lo < hi);
  CHECK(hi < rp.threshold);
  CHECK(lo < -4.50625e-3);
  CHECK(hi > -4.50625e-3);
  // a1_sq at the lower end is comfortably positive.
  CHECK(reduction::coefficients(rp, lo).a1_sq >= 4.0);
}

TEST_CASE("quantization roots: screened Coulomb, spin") {
  const auto rp = reduction::reduce(kHell, kHellSpin, {0, -2});
  const auto [lo, hi] = spectra::default_nu_bracket(rp);
  const auto roots =
      spectra::nu_root_scan(rp, 0, lo, hi, spectra::default_nu_tol(lo, hi));
  REQUIRE_FALSE(roots.empty());
  const auto best = spectra::nu_select(roots, -4.70625e-3);
  REQUIRE(best.has_value());
  CHECK(best->eps == Catch::Approx(-4.50625e-3).margin(1e-9));
  CHECK(best->key.k_index == 1);
  CHECK(best->key.sign == -1);
  // This root decays too slowly at large radius to be a box eigenfunction:
  // its z -> 0 exponent is negative.
  CHECK(best->alpha == Catch::Approx(-0.875).margin(1e-6));
  CHECK(best->gamma == Catch::Approx(2.0).margin(1e-6));
  CHECK_FALSE(best->normalizable);

  // The doublet partner has the same eigenvalue.
  const auto rp1 = reduction::reduce(kHell, kHellSpin, {0, 1});
  const auto best1 = spectra::nu_select(
      spectra::nu_root_scan(rp1, 0, lo, hi, spectra::default_nu_tol(lo, hi)),
      -4.425e-3);
  REQUIRE(best1.has_value());
  CHECK(best1->eps == Catch::Approx(-4.50625e-3).margin(1e-9));

  // First excitation.
  const auto best2 = spectra::nu_select(
      spectra::nu_root_scan(rp, 1, lo, hi, spectra::default_nu_tol(lo, hi)),
      std::nullopt);
  REQUIRE(best2.has_value());
  CHECK(best2->eps == Catch::Approx(-5.0027777778e-3).margin(1e-11));
}

TEST_CASE("quantization roots: screened Coulomb, pseudospin") {
  const auto rp = reduction::reduce(kHell, kHellPseudo, {0, 1});
  const auto [lo, hi] = spectra::default_nu_bracket(rp);
  const auto best = spectra::nu_select(
      spectra::nu_root_scan(rp, 0, lo, hi, spectra::default_nu_tol(lo, hi)),
      -5.225e-3);
  REQUIRE(best.has_value());
  CHECK(best->eps == Catch::Approx(-5.225e-3).margin(1e-9));
}

TEST_CASE("quantization roots: Varshni") {
  const auto rp = reduction::reduce(kVar, kVarSpin, {0, -2});
  const auto [lo, hi] = spectra::default_nu_bracket(rp);
  const auto best = spectra::nu_select(
      spectra::nu_root_scan(rp, 0, lo, hi, spectra::default_nu_tol(lo, hi)),
      std::nullopt);
  REQUIRE(best.has_value());
  CHECK(best->eps == Catch::Approx(-1.5015625e-5).margin(1e-12));
  CHECK(best->normalizable);

  const auto best1 = spectra::nu_select(
      spectra::nu_root_scan(rp, 1, lo, hi, spectra::default_nu_tol(lo, hi)),
      std::nullopt);
  REQUIRE(best1.has_value());
  CHECK(best1->eps == Catch::Approx(-1.6736111111e-6).margin(5e-13));
  CHECK(best1->normalizable);

  const auto rpp = reduction::reduce(kVar, kVarPseudo, {0, -2});
  const auto [plo, phi] = spectra::default_nu_bracket(rpp);
  const auto pbest = spectra::nu_select(
      spectra::nu_root_scan(rpp, 0, plo, phi, spectra::default_nu_tol(plo, phi)),
      1.484375e-6);
  REQUIRE(pbest.has_value());
  CHECK(pbest->eps == Catch::Approx(4.4375e-6).margin(1e-12));
  CHECK(pbest->alpha == Catch::Approx(1.25).margin(1e-6));
  CHECK(pbest->gamma == Catch::Approx(3.0).margin(1e-6));

  const auto rpq = reduction::reduce(kVar, kVarPseudo, {0, 1});
  const auto [qlo, qhi] = spectra::default_nu_bracket(rpq);
  const auto qbest = spectra::nu_select(
      spectra::nu_root_scan(rpq, 0, qlo, qhi, spectra::default_nu_tol(qlo, qhi)),
      std::nullopt);
  REQUIRE(qbest.has_value());
  CHECK(qbest->eps == Catch::Approx(-1.155625e-4).margin(1e-11));
  CHECK(qbest->alpha == Catch::Approx(10.75).margin(1e-6));
  CHECK(qbest->gamma == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("quantization roots: double-exponential well") {
  const auto rp = reduction::reduce(kWei4, kWei4Pseudo, {0, 1});
  const auto [lo, hi] = spectra::default_nu_bracket(rp);
  const auto best = spectra::nu_select(
      spectra::nu_root_scan(rp, 0, lo, hi, spectra::default_nu_tol(lo, hi)),
      -0.0525);
  REQUIRE(best.has_value());
  CHECK(best->eps == Catch::Approx(8.7950278451e-3).epsilon(1e-8));
  CHECK(best->normalizable);
  CHECK(best->alpha == Catch::Approx(0.347127).margin(1e-5));
  CHECK(best->gamma == Catch::Approx(3.541381).margin(1e-5));

  const auto rpm = reduction::reduce(kWei4, kWei4Pseudo, {0, -2});
  const auto [mlo, mhi] = spectra::default_nu_bracket(rpm);
  const auto mbest = spectra::nu_select(
      spectra::nu_root_scan(rpm, 0, mlo, mhi, spectra::default_nu_tol(mlo, mhi)),
      std::nullopt);
  REQUIRE(mbest.has_value());
  CHECK(mbest->eps == Catch::Approx(5.6051800259e-2).epsilon(1e-8));
  CHECK_FALSE(mbest->normalizable);

  const auto rps = reduction::reduce(kWei3, kWei3Spin, {0, -2});
  const auto [slo, shi] = spectra::default_nu_bracket(rps);
  const auto sbest = spectra::nu_select(
      spectra::nu_root_scan(rps, 0, slo, shi, spectra::default_nu_tol(slo, shi)),
      -6e-4);
  REQUIRE(sbest.has_value());
  CHECK(sbest->eps == Catch::Approx(2.9483176936e-4).epsilon(1e-8));
  CHECK(sbest->normalizable);
}

TEST_CASE("energy_nu wraps the scan results as levels") {
  const auto levels = spectra::energy_nu(kVar, kVarSpin, {0, -2}, -2e-4, 1.9e-6,
                                         1e-13);
  REQUIRE_FALSE(levels.empty());
  bool found = false;
  for (const auto& lvl : levels) {
    CHECK(lvl.method == spectra::Method::nu_rootfind);
    if (std::fabs(lvl.eps + 1.5015625e-5) < 1e-10) found = true;
  }
  CHECK(found);
}

TEST_CASE("root selection policy") {
  spectra::NuRoot good;
  good.eps = -1.0;
  good.normalizable = true;
  spectra::NuRoot bad;
  bad.eps = -2.0;
  bad.normalizable = false;
  spectra::NuRoot good2;
  good2.eps = -3.0;
  good2.normalizable = true;

  CHECK_FALSE(spectra::nu_select({}, std::nullopt).has_value());
  CHECK(spectra::nu_select({bad}, std::nullopt)->eps == -2.0);
  // Normalizable representatives win over non-normalizable ones.
  CHECK(spectra::nu_select({bad, good}, std::nullopt)->eps == -1.0);
  // Ties among normalizable roots go to the closed-form hint.
  CHECK(spectra::nu_select({good2, bad, good}, -2.8)->eps == -3.0);
  CHECK(spectra::nu_select({good2, bad, good}, -1.2)->eps == -1.0);
  // Without a hint the lowest survivor is returned.
  CHECK(spectra::nu_select({good2, bad, good}, std::nullopt)->eps == -3.0);
}

TEST_CASE("batch spectrum with per-row flags") {
  spectra::SpectrumRequest req;
  req.spec = kHell;
  req.sym = kHellSpin;
  req.n_values = {0, 1};
  req.kappa_values = {-2, -1, 0, 1, 2};
  const auto rows = spectra::spectrum(req);
  REQUIRE(rows.size() == 10);
  // n-major ordering with kappa in the requested order.
  CHECK(rows[0].n == 0);
  CHECK(rows[0].kappa == -2);
  CHECK(rows[5].n == 1);
  CHECK(rows[5].kappa == -2);
  // kappa = 0 is singular everywhere; n + kappa = 0 at (1, -1).
  CHECK(rows[2].flag == "SINGULAR");
  CHECK(rows[7].flag == "SINGULAR");
  CHECK(rows[6].flag == "SINGULAR");
  CHECK(rows[1].flag.empty());  // (0, -1) is fine
  REQUIRE(rows[0].level.has_value());
  CHECK(rows[0].level->eps == Catch::Approx(-4.70625e-3).margin(1e-15));
  CHECK_FALSE(rows[2].level.has_value());
}

TEST_CASE("batch spectrum error paths") {
  spectra::SpectrumRequest req;
  req.spec = kHell;
  req.sym = kHellSpin;
  req.n_values = {};
  req.kappa_values = {-2};
  CHECK_THROWS_AS(spectra::spectrum(req), UsageError);

  req.n_values = {0};
  req.method = spectra::Method::oracle;
  CHECK_THROWS_AS(spectra::spectrum(req), UsageError);

  // An eigensolver callback that never finds a level flags NO_BOUND.
  const auto rows = spectra::spectrum(
      req, [](const reduction::ReducedProblem&, int) { return std::nullopt; });
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].flag == "NO_BOUND");
  CHECK_FALSE(rows[0].level.has_value());
}
