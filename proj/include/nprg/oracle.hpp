#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nprg/grid_flow.hpp"
#include "nprg/polynomial.hpp"
#include "nprg/potentials.hpp"

namespace nprg {

struct OracleOptions {
  bool extrapolate = true;      // Richardson from h and h/2
  bool auto_widen = true;       // widen at fixed spacing on boundary leakage
  double leak_tol = 1e-8;       // |psi_{k-1}| allowed near the boundaries
  int max_points = 60001;
};

/// Lowest k eigenpairs of H = -1/2 d^2/dx^2 + V with Dirichlet ends, from the
/// 3-point discretization. With extrapolation on, energies are
/// (4 E(h/2) - E(h)) / 3 and moments are extrapolated the same way.
struct SpectralSolution {
  Grid1D grid;
  std::vector<double> energies;               // reported (extrapolated when enabled)
  std::vector<Eigen::VectorXd> wavefunctions;  // on grid, h * sum psi^2 = 1
  std::vector<double> raw_energies;            // on grid
  std::optional<Grid1D> fine_grid;
  std::vector<double> fine_energies;
  std::vector<Eigen::VectorXd> fine_wavefunctions;

  int states() const { return static_cast<int>(energies.size()); }
};

/// Default oracle grid: [-10, 10] with 2001 nodes.
Grid1D default_oracle_grid();

/// Throws DomainTooSmallError if leakage persists up to max_points.
SpectralSolution solve_schrodinger_1d(const Polynomial1D& v, const Grid1D& grid, int k,
                                      const OracleOptions& opt = {});

/// Plain tridiagonal eigen-solve on one grid: energies and normalized states.
void tridiagonal_lowest(const Eigen::VectorXd& diag, double offdiag, int k, std::vector<double>& energies,
                        std::vector<Eigen::VectorXd>& vectors);

/// M_n = h sum x^n psi_0^2.
double wavefunction_moment(const SpectralSolution& sol, int n);

/// <a| x^p |b> on the solution grid (extrapolated when a fine grid is present).
double matrix_element(const SpectralSolution& sol, int a, int p, int b);

struct PoleDecomposition {
  std::vector<double> c;  // C_n = <n|x|0>, n = 0..K-1
  std::vector<double> d;  // D_n = 2 C_n^2 (E_n - E_0)
  double residual = 0.0;  // 1 - sum D_n
};

PoleDecomposition pole_coefficients(const SpectralSolution& sol, int k);

/// E1 - E0 of the interacting pair to first order in F, using the symmetric
/// states |00> and (|01> + |10>)/sqrt2 built from one-particle double-well
/// eigenstates at lambda0.
double two_particle_first_order_gap(double lambda0, const Interaction& f);
double two_particle_first_order_gap(const SpectralSolution& one_particle, const BivariatePolynomial& f);

}  // namespace nprg
