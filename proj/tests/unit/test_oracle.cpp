#include <cmath>

#include <doctest.h>

#include "nprg/errors.hpp"
#include "nprg/oracle.hpp"
#include "nprg/potentials.hpp"

using namespace nprg;

namespace {

int sign_changes(const Eigen::VectorXd& psi) {
  const double floor = 1e-6 * psi.cwiseAbs().maxCoeff();
  int changes = 0;
  double last = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (std::abs(psi(i)) < floor) continue;
    if (last != 0.0 && (psi(i) > 0) != (last > 0)) ++changes;
    last = psi(i);
  }
  return changes;
}

}  // namespace

TEST_CASE("harmonic spectrum") {
  const SpectralSolution s = solve_schrodinger_1d(Polynomial1D{0.0, 0.0, 0.5}, default_oracle_grid(), 6);
  REQUIRE(s.states() == 6);
  for (int n = 0; n < 6; ++n) CHECK(std::abs(s.energies[n] - (n + 0.5)) < 1e-6);
  for (int n = 0; n < 6; ++n) {
    const double h = s.grid.spacing();
    CHECK(std::abs(h * s.wavefunctions[n].squaredNorm() - 1.0) < 1e-10);
    CHECK(sign_changes(s.wavefunctions[n]) == n);
  }
  for (int n = 1; n < 6; ++n) CHECK(s.energies[n] > s.energies[n - 1]);
}

TEST_CASE("harmonic moments and virial balance") {
  const SpectralSolution s = solve_schrodinger_1d(Polynomial1D{0.0, 0.0, 0.5}, default_oracle_grid(), 2);
  CHECK(std::abs(wavefunction_moment(s, 2) - 0.5) < 1e-6);
  CHECK(std::abs(wavefunction_moment(s, 1)) < 1e-10);
  CHECK(std::abs(wavefunction_moment(s, 3)) < 1e-10);
  // <V> = <x^2>/2 and <T> = E0 - <V>.
  const double pot = 0.5 * wavefunction_moment(s, 2);
  CHECK(std::abs((s.energies[0] - pot) - pot) < 1e-6);
}

TEST_CASE("anharmonic and SUSY ground states") {
  const SpectralSolution a =
      solve_schrodinger_1d(make_standard_potential(WellKind::single_well, 0.1), default_oracle_grid(), 2);
  CHECK(a.energies[0] == doctest::Approx(0.559146327).epsilon(1e-7));
  const SpectralSolution s = solve_schrodinger_1d(Polynomial1D{-0.5, 0.0, 0.5}, default_oracle_grid(), 1);
  CHECK(std::abs(s.energies[0]) < 1e-8);
}

TEST_CASE("extrapolated grid convergence") {
  const Grid1D g = default_oracle_grid();
  const Polynomial1D v = make_standard_potential(WellKind::double_well, 0.2);
  const SpectralSolution coarse = solve_schrodinger_1d(v, g, 4);
  const SpectralSolution fine = solve_schrodinger_1d(v, g.refined(), 4);
  for (int n = 0; n < 4; ++n)
    CHECK(std::abs(coarse.energies[n] - fine.energies[n]) / std::abs(fine.energies[n]) < 1e-6);
}

TEST_CASE("odd moments vanish for even potentials") {
  const SpectralSolution s =
      solve_schrodinger_1d(make_standard_potential(WellKind::double_well, 0.2), default_oracle_grid(), 2);
  for (int n : {1, 3, 5}) CHECK(std::abs(wavefunction_moment(s, n)) < 1e-10);
  CHECK(wavefunction_moment(s, 2) > 0.0);
}

TEST_CASE("harmonic pole decomposition") {
  const SpectralSolution s = solve_schrodinger_1d(Polynomial1D{0.0, 0.0, 0.5}, Grid1D(-15.0, 15.0, 3001), 40);
  const PoleDecomposition p = pole_coefficients(s, 40);
  CHECK(std::abs(p.d[1] - 1.0) < 1e-8);
  for (int n = 2; n < 40; ++n) CHECK(std::abs(p.d[n]) < 1e-8);
  CHECK(std::abs(p.residual) < 1e-8);
}

TEST_CASE("pole dominance") {
  const SpectralSolution sw =
      solve_schrodinger_1d(make_standard_potential(WellKind::single_well, 1.0), default_oracle_grid(), 40);
  const PoleDecomposition ps = pole_coefficients(sw, 40);
  CHECK(ps.d[1] > 0.97);
  CHECK(std::abs(ps.residual) < 1e-3);
  double partial = 0.0;
  for (int n = 0; n < 40; ++n) {
    CHECK(ps.d[n] >= -1e-12);
    partial += ps.d[n];
    CHECK(partial <= 1.0 + 1e-9);
  }

  auto d1 = [](double l) {
    const SpectralSolution s =
        solve_schrodinger_1d(make_standard_potential(WellKind::double_well, l), default_oracle_grid(), 40);
    return pole_coefficients(s, 40);
  };
  const PoleDecomposition strong = d1(0.2);
  const PoleDecomposition weak = d1(0.05);
  CHECK(weak.d[1] < 0.8 * strong.d[1]);
  CHECK(std::abs(strong.residual) < 1e-3);
  CHECK(std::abs(weak.residual) < 1e-3);
}

TEST_CASE("boundary leakage") {
  OracleOptions opt;
  opt.auto_widen = false;
  CHECK_THROWS_AS(solve_schrodinger_1d(Polynomial1D{0.0, 0.0, 0.5}, Grid1D(-2.0, 2.0, 401), 3, opt),
                  DomainTooSmallError);
  const SpectralSolution w = solve_schrodinger_1d(Polynomial1D{0.0, 0.0, 0.5}, Grid1D(-2.0, 2.0, 401), 3);
  CHECK(w.grid.x_max() > 2.0);
  CHECK(std::abs(w.energies[2] - 2.5) < 1e-6);
}

TEST_CASE("two-particle first-order reference") {
  const double l = 0.2;
  const SpectralSolution one =
      solve_schrodinger_1d(make_standard_potential(WellKind::double_well, l), default_oracle_grid(), 4);
  const double gap = one.energies[1] - one.energies[0];
  CHECK(two_particle_first_order_gap(one, BivariatePolynomial{}) == doctest::Approx(gap).epsilon(1e-12));

  // F = C phi1 phi2: |00> shifts by C <0|x|0>^2 = 0, the symmetric state by C <0|x|1>^2.
  const double c = 0.05;
  const double x01 = matrix_element(one, 0, 1, 1);
  CHECK(std::abs(matrix_element(one, 0, 1, 0)) < 1e-10);
  const double lin = two_particle_first_order_gap(one, interaction_polynomial(Interaction::linear(c)));
  CHECK(lin == doctest::Approx(gap + c * x01 * x01).epsilon(1e-10));
  CHECK(two_particle_first_order_gap(l, Interaction::linear(c)) == doctest::Approx(lin).epsilon(1e-10));

  // Attractive quadratic coupling lowers the gap.
  CHECK(two_particle_first_order_gap(l, Interaction::quadratic(0.05)) < gap);
  CHECK(two_particle_first_order_gap(l, Interaction::quadratic(-0.05)) > gap);
}

TEST_CASE("SUSY partner ground states are non-negative") {
  for (double g : {0.2, 0.4, 1.0}) {
    const Polynomial1D vp = susy_partner_potentials({g}).first;
    const double hi = std::min(1.0 / g + 10.0, 50.0);
    const SpectralSolution s = solve_schrodinger_1d(vp, Grid1D(-10.0, hi, static_cast<int>((hi + 10.0) / 0.01) + 1), 1);
    CHECK(s.energies[0] >= -1e-8);
  }
}
