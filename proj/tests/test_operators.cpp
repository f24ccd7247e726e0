#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "qpnls/operators.hpp"
#include "oracles.hpp"

using namespace qpnls;

namespace {

LatticePtr lat_1d(int N) {
  return build_lattice(ProjectionMatrix(1, 2, {1.0, std::sqrt(3.0)}), N);
}

std::vector<PotentialMode> sine_axis_modes() {
  // sin y1 + sum_{k=1..4} sin(k y2)
  std::vector<PotentialMode> modes;
  const cdouble a{0.0, -0.5};
  modes.push_back({{1, 0}, a});
  modes.push_back({{-1, 0}, -a});
  for (int k = 1; k <= 4; ++k) {
    modes.push_back({{0, k}, a});
    modes.push_back({{0, -k}, -a});
  }
  return modes;
}

}  // namespace

TEST_CASE("kinetic half step phases", "[operators]") {
  auto lat = lat_1d(4);
  QPState s = oracles::random_state(lat, 301);

  QPState same = kinetic_half_step(s, 0.0);
  REQUIRE(oracles::max_rel_coeff_error(same.coeffs, s.coeffs) == 0.0);

  QPState mode = zero_state(lat);
  const std::vector<int> k0 = {2, 1};
  const cdouble amp{0.4, 0.7};
  mode.coeffs[lat->index_of(k0)] = amp;
  const double tau = 0.37;
  QPState rotated = kinetic_half_step(mode, tau);
  const cdouble got = rotated.coeffs[lat->index_of(k0)];
  REQUIRE_THAT(std::abs(got), Catch::Matchers::WithinRel(std::abs(amp), 1e-14));
  const double lam_sq = lat->lambda_sq()[lat->index_of(k0)];
  REQUIRE_THAT(std::arg(got / amp), Catch::Matchers::WithinAbs(-0.5 * tau * lam_sq, 1e-13));
}

TEST_CASE("kinetic step is unitary and additive in tau", "[operators]") {
  auto lat = lat_1d(8);
  QPState s = oracles::random_state(lat, 302);
  QPState stepped = kinetic_half_step(s, 1.7e-3);
  REQUIRE_THAT(l2_norm(stepped), Catch::Matchers::WithinRel(l2_norm(s), 1e-14));

  QPState two = kinetic_half_step(kinetic_half_step(s, 0.3), 0.45);
  QPState one = kinetic_half_step(s, 0.75);
  // phases reach ~1e2 radians here, so a few ulp of the phase is ~1e-14
  REQUIRE(oracles::max_rel_coeff_error(two.coeffs, one.coeffs) < 1e-13);
}

TEST_CASE("kinetic step commutes with zero-padding", "[operators]") {
  auto coarse = lat_1d(4);
  auto fine = lat_1d(8);
  QPState s = oracles::random_state(coarse, 303);
  const double tau = 2.3e-2;
  QPState a = embed(kinetic_half_step(s, tau), fine);
  QPState b = kinetic_half_step(embed(s, fine), tau);
  // shared modes carry bitwise-identical frequencies on both lattices
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) REQUIRE(a.coeffs[i] == b.coeffs[i]);
}

TEST_CASE("nonlinear phase step", "[operators]") {
  auto lat = lat_1d(4);
  const Potential v0 = build_potential({{{0, 0}, cdouble{2.5, 0.0}}}, lat);
  const Potential none = build_potential({}, lat);

  GridField g = oracles::random_field(lat, 304);
  GridField same = nonlinear_phase_step(g, v0, 1.0, 0.0);
  REQUIRE(oracles::max_rel_coeff_error(same.values, g.values) == 0.0);
  same = nonlinear_phase_step(g, none, 0.0, 0.8);
  REQUIRE(oracles::max_rel_coeff_error(same.values, g.values) == 0.0);

  GridField ones = zero_field(lat);
  for (auto& v : ones.values) v = 1.0;
  const double tau = 0.13;
  GridField uniform = nonlinear_phase_step(ones, v0, 1.0, tau);
  const cdouble want = std::polar(1.0, -tau * (2.5 + 1.0));
  for (const auto& v : uniform.values)
    REQUIRE_THAT(std::abs(v - want), Catch::Matchers::WithinAbs(0.0, 1e-15));

  // pointwise modulus conservation
  GridField out = nonlinear_phase_step(g, v0, -3.7, 0.29);
  for (std::size_t j = 0; j < g.values.size(); ++j)
    REQUIRE_THAT(std::abs(out.values[j]) - std::abs(g.values[j]),
                 Catch::Matchers::WithinAbs(0.0, 1e-14));

  auto other = lat_1d(8);
  const Potential mismatched = build_potential({}, other);
  REQUIRE_THROWS_AS(nonlinear_phase_step(g, mismatched, 1.0, 0.1), ShapeMismatch);
}

TEST_CASE("build_potential materializes sines exactly", "[operators]") {
  auto lat = lat_1d(8);
  const cdouble a{0.0, -0.5};
  const Potential sin_y1 = build_potential({{{1, 0}, a}, {{-1, 0}, -a}}, lat);
  const int ext = lat->extents()[0];
  const double h = lat->grid_spacing();
  for (int j1 = 0; j1 < ext; ++j1)
    for (int j2 = 0; j2 < ext; ++j2)
      REQUIRE_THAT(sin_y1.grid_values()[static_cast<std::size_t>(j1) * ext + j2],
                   Catch::Matchers::WithinAbs(std::sin(j1 * h), 1e-14));

  const Potential v51 = build_potential(sine_axis_modes(), lat);
  REQUIRE_THAT(v51.grid_values()[0], Catch::Matchers::WithinAbs(0.0, 1e-14));  // all sines vanish
  for (int j1 = 0; j1 < ext; ++j1)
    for (int j2 = 0; j2 < ext; ++j2) {
      double want = std::sin(j1 * h);
      for (int k = 1; k <= 4; ++k) want += std::sin(k * j2 * h);
      REQUIRE_THAT(v51.grid_values()[static_cast<std::size_t>(j1) * ext + j2],
                   Catch::Matchers::WithinAbs(want, 1e-13));
    }
}

TEST_CASE("build_potential rejects non-real mode lists", "[operators]") {
  auto lat = lat_1d(4);
  // missing conjugate partner
  REQUIRE_THROWS_AS(build_potential({{{1, 0}, cdouble{0.0, -0.5}}}, lat), NotRealError);
  // partner present but not the conjugate
  REQUIRE_THROWS_AS(
      build_potential({{{1, 0}, cdouble{0.0, -0.5}}, {{-1, 0}, cdouble{0.0, -0.5}}}, lat),
      NotRealError);
  REQUIRE_THROWS_AS(
      build_potential({{{1, 0}, cdouble{1.0, 0.0}}, {{1, 0}, cdouble{1.0, 0.0}}}, lat),
      DomainError);
  REQUIRE_THROWS_AS(build_potential({{{1, 0, 0}, cdouble{1.0, 0.0}}}, lat), DimensionMismatch);
}

TEST_CASE("potential modes outside the lattice alias onto exact grid values", "[operators]") {
  // mode (0,4) on a 2N = 4 grid: e^{i4y} samples equal e^{i0y} = 1 there
  auto lat = lat_1d(2);
  const Potential v = build_potential(
      {{{0, 4}, cdouble{0.5, 0.0}}, {{0, -4}, cdouble{0.5, 0.0}}}, lat);
  const double h = lat->grid_spacing();
  const int ext = lat->extents()[0];
  for (int j1 = 0; j1 < ext; ++j1)
    for (int j2 = 0; j2 < ext; ++j2)
      REQUIRE_THAT(v.grid_values()[static_cast<std::size_t>(j1) * ext + j2],
                   Catch::Matchers::WithinAbs(std::cos(4 * j2 * h), 1e-13));
}
