#include <cmath>
#include <doctest.h>
#include <random>

#include "nmosc/bound_state.hpp"
#include "nmosc/errors.hpp"
#include "nmosc/oracle.hpp"
#include "nmosc/sym_eigen.hpp"

using namespace nmosc;

TEST_CASE("negative_pole: single mode solves the quadratic by hand") {
  // E = 1 + 4/(E-1)  =>  E = -1 (and 3); margin = 1 - 4 = -3
  auto j = SpectralDensity::discrete(DiscreteBath({BathMode{1.0, 2.0}}));
  auto pole = negative_pole(j, 1.0);
  REQUIRE(pole.has_value());
  CHECK(pole->omega0 == doctest::Approx(-1.0).epsilon(1e-11));
  // residue 1/(1 + lambda^2/(E-omega)^2) = 1/(1 + 4/4) = 1/2
  CHECK(pole->residue == doctest::Approx(0.5).epsilon(1e-11));
}

TEST_CASE("negative_pole: weak coupling has no pole, marginal case included") {
  CHECK(!negative_pole(SpectralDensity::power_law(0.1, 1.0, 1.0), 1.0).has_value());
  // margin exactly zero: reported as no pole
  auto marginal = SpectralDensity::discrete(DiscreteBath({BathMode{1.0, 1.0}}));
  CHECK(!negative_pole(marginal, 1.0).has_value());
  auto report = stability_report(marginal, 1.0);
  CHECK(report.margin == 0.0);
  CHECK(!report.unbounded);
  CHECK(!report.pole.has_value());
}

TEST_CASE("negative_pole: strong-coupling ohmic root satisfies g to 1e-10") {
  auto j = SpectralDensity::power_law(2.0, 1.0, 1.0);
  auto pole = negative_pole(j, 1.0);
  REQUIRE(pole.has_value());
  CHECK(pole->omega0 < 0.0);
  CHECK(std::abs(pole_function(j, 1.0, -pole->omega0)) < 1e-10);
  CHECK(pole->residue > 0.0);
  CHECK(pole->residue <= 1.0);
}

TEST_SUITE("slow") {
  TEST_CASE("negative_pole vs K=4000 discretized eigensolver") {
    auto j = SpectralDensity::power_law(2.0, 1.0, 1.0);
    auto pole = negative_pole(j, 1.0);
    REQUIRE(pole.has_value());
    auto bath = discretize(j, 4000, 40.0);
    auto eigen = oracle::bound_state_eigen(bath, 1.0);
    CHECK(std::abs(eigen.energy - pole->omega0) < 1e-3);
  }
}

TEST_CASE("pole function: g(0+) = margin and g is increasing") {
  // discrete density: g(x) - margin = x (1 + sum lambda^2/(w(w+x))) is
  // linear near zero, so the limit is checkable very tightly
  auto jd = SpectralDensity::discrete(DiscreteBath({BathMode{1.0, 2.0}, BathMode{3.0, 1.0}}));
  const double margin_d = 1.0 + frequency_shift(jd);
  CHECK(std::abs(pole_function(jd, 1.0, 1e-13) - margin_d) < 1e-12);

  // sub-ohmic: g approaches the margin like x^s (the integral of J/w^2
  // diverges), so check the limit, not the rate
  auto j = SpectralDensity::power_law(2.0, 0.5, 1.0);
  const double margin = 1.0 + frequency_shift(j);
  double prev_gap = 1e300;
  for (double x : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double gap = std::abs(pole_function(j, 1.0, x) - margin);
    CHECK(gap < prev_gap + 1e-15);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-3);

  std::mt19937 rng(31);
  std::uniform_real_distribution<double> xdist(1e-3, 8.0);
  for (int i = 0; i < 20; ++i) {
    const double x = xdist(rng);
    const double dx = 1e-5 * std::max(1.0, x);
    CHECK(pole_function(j, 1.0, x + dx) > pole_function(j, 1.0, x - dx));
  }
}

TEST_CASE("iff sweep: pole existence flips exactly at the margin sign change") {
  // margin = 1 - alpha for the ohmic family at Omega = omega_c = 1
  int flips = 0;
  bool prev = false;
  for (int i = 0; i < 40; ++i) {
    const double alpha = 0.05 + 2.0 * i / 39.0;
    auto j = SpectralDensity::power_law(alpha, 1.0, 1.0);
    const bool has_pole = negative_pole(j, 1.0).has_value();
    CHECK(has_pole == (1.0 - alpha < 0.0));
    if (i > 0 && has_pole != prev) ++flips;
    prev = has_pole;
  }
  CHECK(flips == 1);
}

TEST_CASE("gap_pole: zero base puts the pole at Omega with residue one") {
  auto gap = SpectralDensity::band_gap(SpectralDensity::power_law(0.0, 1.0, 1.0), 1.0, 2.0);
  auto scan = gap_pole(gap, 1.5);
  REQUIRE(scan.pole.has_value());
  CHECK(scan.pole->omega0 == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(scan.pole->residue == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gap_pole: weak base shifts the pole slightly, residue below one") {
  auto gap = SpectralDensity::band_gap(SpectralDensity::power_law(0.01, 1.0, 1.0), 1.0, 2.0);
  auto scan = gap_pole(gap, 1.5);
  REQUIRE(scan.pole.has_value());
  CHECK(std::abs(scan.pole->omega0 - 1.5) < 0.05);
  CHECK(scan.pole->omega0 > 1.0);
  CHECK(scan.pole->omega0 < 2.0);
  CHECK(scan.pole->residue < 1.0);
  CHECK(scan.pole->residue > 0.9);

  // residue -> 1 as the coupling -> 0
  double prev_residue = scan.pole->residue;
  for (double alpha : {1e-3, 1e-4}) {
    auto weaker = SpectralDensity::band_gap(SpectralDensity::power_law(alpha, 1.0, 1.0), 1.0, 2.0);
    auto weaker_scan = gap_pole(weaker, 1.5);
    REQUIRE(weaker_scan.pole.has_value());
    CHECK(weaker_scan.pole->residue > prev_residue);
    prev_residue = weaker_scan.pole->residue;
  }
  CHECK(prev_residue > 0.999);
}

TEST_CASE("gap_pole: cross-check against a discretized bath with the gap removed") {
  auto gap = SpectralDensity::band_gap(SpectralDensity::power_law(0.05, 1.0, 1.0), 1.0, 2.0);
  auto scan = gap_pole(gap, 1.5);
  REQUIRE(scan.pole.has_value());

  auto bath = discretize(gap, 1200, 12.0);
  auto model = oracle::SingleExcitationModel::build(bath, 1.5);
  auto eig = sym_eigen(model.hamiltonian, model.dimension, false);
  double in_gap = 0.0;
  double best = 1e300;
  for (double e : eig.values) {
    if (e > 1.0 && e < 2.0 && std::abs(e - 1.5) < best) {
      best = std::abs(e - 1.5);
      in_gap = e;
    }
  }
  REQUIRE(in_gap != 0.0);
  CHECK(std::abs(in_gap - scan.pole->omega0) < 1e-3);
}

TEST_CASE("gap_pole: far-detuned system finds no in-gap root") {
  auto gap = SpectralDensity::band_gap(SpectralDensity::power_law(2.0, 1.0, 1.0), 1.0, 2.0);
  auto scan = gap_pole(gap, 5.0);
  CHECK(!scan.pole.has_value());
  CHECK(scan.all_roots.empty());
  CHECK_THROWS_AS(gap_pole(SpectralDensity::power_law(1.0, 1.0, 1.0), 1.0),
                  UnsupportedVariantError);
}

TEST_CASE("discrete_bound_energy: hand values and eigensolver oracle") {
  auto root = discrete_bound_energy(DiscreteBath({BathMode{1.0, 2.0}}), 1.0);
  REQUIRE(root.has_value());
  CHECK(*root == doctest::Approx(-1.0).epsilon(1e-12));

  CHECK(!discrete_bound_energy(DiscreteBath({BathMode{1.0, 0.1}}), 1.0).has_value());

  DiscreteBath two({BathMode{1.0, 1.0}, BathMode{2.0, 1.0}});
  auto e = discrete_bound_energy(two, 0.5);
  REQUIRE(e.has_value());
  auto eigen = oracle::bound_state_eigen(two, 0.5);
  CHECK(std::abs(*e - eigen.energy) < 1e-12);

  CHECK_THROWS_AS(discrete_bound_energy(DiscreteBath(), 1.0), DomainError);
}

TEST_CASE("stability_report assembles the pieces consistently") {
  auto weak = stability_report(SpectralDensity::power_law(0.1, 1.0, 1.0), 1.0);
  CHECK(weak.margin == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(!weak.unbounded);
  CHECK(!weak.pole.has_value());

  auto strong = stability_report(SpectralDensity::power_law(2.0, 1.0, 1.0), 1.0);
  CHECK(strong.margin == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(strong.unbounded);
  REQUIRE(strong.pole.has_value());
  CHECK(strong.pole->omega0 < 0.0);

  auto discrete = stability_report(SpectralDensity::discrete(DiscreteBath({BathMode{1.0, 2.0}})), 1.0);
  CHECK(discrete.margin == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(discrete.unbounded);
  REQUIRE(discrete.discrete_energy.has_value());
  CHECK(*discrete.discrete_energy == doctest::Approx(-1.0).epsilon(1e-11));
  REQUIRE(discrete.pole.has_value());
  CHECK(std::abs(discrete.pole->omega0 - *discrete.discrete_energy) < 1e-10);

  // band gap with no negative pole: the in-gap pole fills the pole field
  auto gapped = stability_report(
      SpectralDensity::band_gap(SpectralDensity::power_law(0.01, 1.0, 1.0), 1.0, 2.0), 1.5);
  CHECK(!gapped.unbounded);
  REQUIRE(gapped.pole.has_value());
  CHECK(gapped.pole->omega0 > 0.0);
  REQUIRE(gapped.in_gap_pole.has_value());
}

TEST_CASE("qbm_stability: formula substitution") {
  auto marginal = qbm_stability(1.0, {QbmMode{1.0, 1.0, 1.0}});
  CHECK(marginal.delta_kappa == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(marginal.kappa_renormalized == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(!marginal.unstable);  // strict inequality

  auto unstable = qbm_stability(1.0, {QbmMode{1.0, 1.0, 2.0}});
  CHECK(unstable.kappa_renormalized == doctest::Approx(-3.0).epsilon(1e-15));
  CHECK(unstable.unstable);

  auto stable = qbm_stability(4.0, {QbmMode{1.0, 1.0, 1.0}, QbmMode{2.0, 2.0, 2.0}});
  CHECK(stable.delta_kappa == doctest::Approx(-1.5).epsilon(1e-15));
  CHECK(stable.kappa_renormalized == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(!stable.unstable);

  CHECK_THROWS_AS(qbm_stability(1.0, {QbmMode{0.0, 1.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(qbm_stability(1.0, {QbmMode{1.0, -1.0, 1.0}}), DomainError);
}

TEST_CASE("residues stay in (0, 1] across couplings") {
  for (double alpha : {1.2, 2.0, 3.0, 5.0}) {
    auto pole = negative_pole(SpectralDensity::power_law(alpha, 1.0, 1.0), 1.0);
    REQUIRE(pole.has_value());
    CHECK(pole->residue > 0.0);
    CHECK(pole->residue <= 1.0);
  }
}
