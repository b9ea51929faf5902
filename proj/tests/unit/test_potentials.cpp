#include <cmath>
#include <random>

#include <doctest.h>

#include "nprg/errors.hpp"
#include "nprg/potentials.hpp"

using namespace nprg;

TEST_CASE("standard potentials") {
  const Polynomial1D single = make_standard_potential(WellKind::single_well, 1.0);
  CHECK(single.coeff(2) == 0.5);
  CHECK(single.coeff(4) == 1.0);
  CHECK(single(1.0) == doctest::Approx(1.5));

  const Polynomial1D dw = make_standard_potential(WellKind::double_well, 0.2);
  CHECK(dw(0.0) == 0.0);
  CHECK(dw.derivative()(std::sqrt(1.25)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(dw.derivative()(-std::sqrt(1.25)) == doctest::Approx(0.0).epsilon(1e-14));

  const Polynomial1D asym = make_standard_potential(WellKind::asym_double_well, 0.2, 0.2);
  for (double x : {-2.0, -0.3, 0.7, 3.1}) CHECK(asym(x) - asym(-x) == doctest::Approx(0.4 * x));

  CHECK_THROWS_AS(make_standard_potential(WellKind::single_well, 0.0), ConfigError);
  CHECK_THROWS_AS(make_standard_potential(WellKind::double_well, -1.0), ConfigError);
}

TEST_CASE("SUSY partners") {
  auto [vp0, vm0] = susy_partner_potentials(SusyPotentialW{0.0});
  CHECK(vp0.coeff(0) == doctest::Approx(-0.5));
  CHECK(vp0.coeff(2) == doctest::Approx(0.5));
  CHECK(vm0.coeff(0) == doctest::Approx(0.5));

  auto [vp, vm] = susy_partner_potentials(SusyPotentialW{0.24});
  CHECK(vp.coeff(0) == doctest::Approx(-0.5));
  CHECK(vp.coeff(1) == doctest::Approx(0.24));
  CHECK(vp.coeff(2) == doctest::Approx(0.5));
  CHECK(vp.coeff(3) == doctest::Approx(-0.24));
  CHECK(vp.coeff(4) == doctest::Approx(0.0288));

  // Above the single-well threshold V+ has exactly one stationary point.
  auto [vp4, vm4] = susy_partner_potentials(SusyPotentialW{0.4});
  CHECK(real_roots(vp4.derivative()).size() == 1);
  auto [vp2, vm2] = susy_partner_potentials(SusyPotentialW{0.2});
  CHECK(real_roots(vp2.derivative()).size() == 3);

  for (double g : {0.0, 0.1, 0.3, 1.0}) {
    const SusyPotentialW w{g};
    auto [p, m] = susy_partner_potentials(w);
    const Polynomial1D diff = p - m - w.polynomial().derivative();
    for (int n = 0; n <= 4; ++n) CHECK(std::abs(diff.coeff(n)) < 1e-15);
  }
}

TEST_CASE("shift to minimum") {
  const ShiftedPotential h = shift_to_minimum(Polynomial1D{0.5, -1.0, 0.5});
  CHECK(h.x_min == doctest::Approx(1.0));
  CHECK(h.shifted.coeff(2) == doctest::Approx(0.5));
  CHECK(std::abs(h.shifted.coeff(1)) < 1e-12);
  CHECK(std::abs(h.shifted.coeff(0)) < 1e-12);

  const Polynomial1D asym{0.0, 0.2, -0.5, 0.0, 0.2};
  const ShiftedPotential s = shift_to_minimum(asym);
  CHECK(s.x_min == doctest::Approx(-1.21).epsilon(0.01));
  CHECK(std::abs(s.shifted.coeff(1)) < 1e-10);
  CHECK(s.shifted.coeff(2) > 0.0);

  const Polynomial1D sym{0.0, 0.0, -0.5, 0.0, 0.2};
  try {
    shift_to_minimum(sym);
    FAIL("degenerate minima not reported");
  } catch (const DegenerateMinimumError& e) {
    CHECK(e.left() == doctest::Approx(-std::sqrt(1.25)));
    CHECK(e.right() == doctest::Approx(std::sqrt(1.25)));
  }
  const Polynomial1D back = shift_to(sym, std::sqrt(1.25)).shifted.shifted(-std::sqrt(1.25));
  for (int n = 0; n <= 4; ++n) CHECK(std::abs(back.coeff(n) - sym.coeff(n)) < 1e-12);
}

TEST_CASE("shift then unshift is the identity") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial1D p{c(rng), c(rng), c(rng), c(rng), 0.5 + std::abs(c(rng))};
    const ShiftedPotential s = shift_to_minimum(p);
    const Polynomial1D back = s.shifted.shifted(-s.x_min);
    for (int n = 0; n <= 4; ++n) CHECK(std::abs(back.coeff(n) - p.coeff(n)) < 1e-12);
  }
}

TEST_CASE("even bare potentials have exactly zero odd coefficients") {
  for (WellKind k : {WellKind::single_well, WellKind::double_well}) {
    const Polynomial1D p = make_standard_potential(k, 0.37);
    CHECK(p.coeff(1) == 0.0);
    CHECK(p.coeff(3) == 0.0);
  }
}

TEST_CASE("two-particle potentials") {
  const BivariatePolynomial free = make_two_particle_potential(0.2, Interaction::linear(0.0));
  for (double a : {-1.0, 0.3, 2.0})
    for (double b : {-0.7, 0.0, 1.1})
      CHECK(free(a, b) == doctest::Approx(-0.5 * a * a + 0.2 * std::pow(a, 4) - 0.5 * b * b + 0.2 * std::pow(b, 4)));

  CHECK(make_two_particle_potential(0.2, Interaction::quadratic(0.05)).coeff(1, 1) == doctest::Approx(-0.1));
  CHECK(make_two_particle_potential(0.2, Interaction::quartic(0.01))(1.0, -1.0) == doctest::Approx(-0.44));
}

TEST_CASE("rotation to normal coordinates") {
  const double l = 0.2, c = 0.05;
  const BivariatePolynomial lin = rotate_to_normal_coordinates(make_two_particle_potential(l, Interaction::linear(c)));
  CHECK(lin.coeff(2, 0) == doctest::Approx(0.5 * (-1.0 - c)));
  CHECK(lin.coeff(0, 2) == doctest::Approx(0.5 * (-1.0 + c)));
  CHECK(lin.coeff(2, 2) == doctest::Approx(3.0 * l));

  const BivariatePolynomial quad =
      rotate_to_normal_coordinates(make_two_particle_potential(l, Interaction::quadratic(c)));
  CHECK(quad.coeff(2, 0) == doctest::Approx(0.5 * (-1.0 + 4.0 * c)));

  const BivariatePolynomial quart =
      rotate_to_normal_coordinates(make_two_particle_potential(l, Interaction::quartic(0.01)));
  CHECK(quart.coeff(4, 0) == doctest::Approx(l / 2.0 + 4.0 * 0.01));

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (Interaction f : {Interaction::linear(0.07), Interaction::quadratic(-0.05), Interaction::quartic(0.01)}) {
    const BivariatePolynomial p = make_two_particle_potential(l, f);
    const BivariatePolynomial r = rotate_to_normal_coordinates(p);
    for (int k = 0; k < 100; ++k) {
      const double x1 = u(rng), x2 = u(rng);
      const double phi1 = (x1 + x2) / std::sqrt(2.0), phi2 = (x2 - x1) / std::sqrt(2.0);
      CHECK(r(x1, x2) == doctest::Approx(p(phi1, phi2)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(rotate_to_normal_coordinates(make_two_particle_potential(l, Interaction::quartic(0.01)), 3),
                  ConfigError);
}

TEST_CASE("interaction names round-trip") {
  for (auto k : {Interaction::Kind::linear, Interaction::Kind::quadratic, Interaction::Kind::quartic})
    CHECK(interaction_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(interaction_kind_from_string("cubic"), ConfigError);
}
