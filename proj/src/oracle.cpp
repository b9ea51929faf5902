#include "nprg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nprg/errors.hpp"

namespace nprg {

namespace {

// Number of eigenvalues of the tridiagonal (diag, e) below x.
int sturm_count(const Eigen::VectorXd& diag, double e, double x) {
  const double e2 = e * e;
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, e2);
  int count = 0;
  double q = diag(0) - x;
  if (q < 0.0) ++count;
  for (Eigen::Index i = 1; i < diag.size(); ++i) {
    if (std::abs(q) < pivmin) q = -pivmin;
    q = diag(i) - x - e2 / q;
    if (q < 0.0) ++count;
  }
  return count;
}

// Solves (T - shift) y = b with partial pivoting (T has constant off-diagonal e).
Eigen::VectorXd solve_shifted(const Eigen::VectorXd& diag, double e, double shift, const Eigen::VectorXd& b) {
  const Eigen::Index n = diag.size();
  // Row i of the working band: l(i) x_{i-1} + d(i) x_i + u1(i) x_{i+1} + u2(i) x_{i+2}.
  Eigen::VectorXd d = diag.array() - shift, u1 = Eigen::VectorXd::Constant(n, e), u2 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd l = Eigen::VectorXd::Constant(n, e);
  Eigen::VectorXd r = b;
  const double tiny = 1e-300;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (std::abs(l(i + 1)) > std::abs(d(i))) {
      std::swap(d(i), l(i + 1));
      std::swap(u1(i), d(i + 1));
      std::swap(u2(i), u1(i + 1));
      std::swap(r(i), r(i + 1));
    }
    if (std::abs(d(i)) < tiny) d(i) = tiny;
    const double m = l(i + 1) / d(i);
    d(i + 1) -= m * u1(i);
    u1(i + 1) -= m * u2(i);
    r(i + 1) -= m * r(i);
  }
  if (std::abs(d(n - 1)) < tiny) d(n - 1) = tiny;
  Eigen::VectorXd x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double acc = r(i);
    if (i + 1 < n) acc -= u1(i) * x(i + 1);
    if (i + 2 < n) acc -= u2(i) * x(i + 2);
    x(i) = acc / d(i);
  }
  return x;
}

// Fixes the sign so that the first significant lobe is positive.
void fix_sign(Eigen::VectorXd& v) {
  const double cut = 1e-3 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > cut) {
      if (v(i) < 0.0) v = -v;
      return;
    }
}

struct OneGrid {
  std::vector<double> energies;
  std::vector<Eigen::VectorXd> psi;  // full grid including the zero end nodes
};

OneGrid solve_on(const Polynomial1D& v, const Grid1D& g, int k) {
  const int n = g.points() - 2;
  if (n < k + 2) throw DomainTooSmallError("oracle grid has too few interior nodes");
  const double h = g.spacing();
  const double e = -0.5 / (h * h);
  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) diag(i) = 1.0 / (h * h) + v(g.x(i + 1));
  OneGrid out;
  std::vector<Eigen::VectorXd> inner;
  tridiagonal_lowest(diag, e, k, out.energies, inner);
  for (auto& y : inner) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(g.points());
    full.segment(1, n) = y / std::sqrt(h);
    out.psi.push_back(std::move(full));
  }
  return out;
}

bool leaks(const Eigen::VectorXd& psi, double tol) {
  const Eigen::Index n = psi.size();
  const Eigen::Index band = std::max<Eigen::Index>(2, n / 50);
  return psi.head(band).cwiseAbs().maxCoeff() > tol || psi.tail(band).cwiseAbs().maxCoeff() > tol;
}

double grid_moment(const Grid1D& g, const Eigen::VectorXd& a, int p, const Eigen::VectorXd& b) {
  double acc = 0.0;
  for (int i = 0; i < g.points(); ++i) acc += std::pow(g.x(i), p) * a(i) * b(i);
  return acc * g.spacing();
}

double richardson(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

}  // namespace

Grid1D default_oracle_grid() { return Grid1D(-10.0, 10.0, 2001); }

void tridiagonal_lowest(const Eigen::VectorXd& diag, double offdiag, int k, std::vector<double>& energies,
                        std::vector<Eigen::VectorXd>& vectors) {
  const Eigen::Index n = diag.size();
  if (k < 1 || k > n) throw ConfigError("requested state count out of range");
  const double radius = 2.0 * std::abs(offdiag);
  const double lo0 = diag.minCoeff() - radius;
  const double hi0 = diag.maxCoeff() + radius;
  const double scale = std::max(std::abs(lo0), std::abs(hi0));

  energies.assign(k, 0.0);
  vectors.clear();
  for (int j = 0; j < k; ++j) {
    double lo = lo0, hi = hi0;
    if (j > 0) lo = std::max(lo, energies[j - 1]);
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * scale; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (sturm_count(diag, offdiag, mid) > j)
        hi = mid;
      else
        lo = mid;
    }
    energies[j] = 0.5 * (lo + hi);
  }

  for (int j = 0; j < k; ++j) {
    const double shift = energies[j] + 1e2 * std::numeric_limits<double>::epsilon() * scale;
    Eigen::VectorXd y = Eigen::VectorXd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) += 0.1 * std::sin(0.37 * static_cast<double>(i) + j);
    for (int it = 0; it < 4; ++it) {
      y = solve_shifted(diag, offdiag, shift, y);
      for (int m = std::max(0, j - 3); m < j; ++m)
        if (std::abs(energies[m] - energies[j]) < 1e-6 * scale) y -= vectors[m].dot(y) * vectors[m];
      y.normalize();
    }
    fix_sign(y);
    vectors.push_back(y);
  }
}

SpectralSolution solve_schrodinger_1d(const Polynomial1D& v, const Grid1D& grid, int k, const OracleOptions& opt) {
  Grid1D g = grid;
  OneGrid coarse = solve_on(v, g, k);
  while (leaks(coarse.psi.back(), opt.leak_tol)) {
    const Grid1D wider = g.widened(1.5);
    const int needed = opt.extrapolate ? 2 * wider.points() - 1 : wider.points();
    if (!opt.auto_widen || needed > opt.max_points)
      throw DomainTooSmallError("oracle: highest state leaks through the grid boundary");
    g = wider;
    coarse = solve_on(v, g, k);
  }

  SpectralSolution sol{g, coarse.energies, coarse.psi, coarse.energies, std::nullopt, {}, {}};
  if (!opt.extrapolate) return sol;
  const Grid1D fine = g.refined();
  OneGrid f = solve_on(v, fine, k);
  sol.fine_grid = fine;
  sol.fine_energies = f.energies;
  sol.fine_wavefunctions = std::move(f.psi);
  for (int j = 0; j < k; ++j) sol.energies[j] = richardson(coarse.energies[j], sol.fine_energies[j]);
  return sol;
}

double matrix_element(const SpectralSolution& sol, int a, int p, int b) {
  if (a < 0 || b < 0 || a >= sol.states() || b >= sol.states()) throw ConfigError("state index out of range");
  const double coarse = grid_moment(sol.grid, sol.wavefunctions[a], p, sol.wavefunctions[b]);
  if (!sol.fine_grid) return coarse;
  const double fine = grid_moment(*sol.fine_grid, sol.fine_wavefunctions[a], p, sol.fine_wavefunctions[b]);
  return richardson(coarse, fine);
}

double wavefunction_moment(const SpectralSolution& sol, int n) { return matrix_element(sol, 0, n, 0); }

PoleDecomposition pole_coefficients(const SpectralSolution& sol, int k) {
  if (k < 1 || k > sol.states()) throw ConfigError("pole count exceeds the solved states");
  PoleDecomposition p;
  double total = 0.0;
  for (int n = 0; n < k; ++n) {
    // Extrapolate C_n^2 rather than C_n so the state sign convention drops out.
    const double cc = grid_moment(sol.grid, sol.wavefunctions[n], 1, sol.wavefunctions[0]);
    double c2 = cc * cc;
    if (sol.fine_grid) {
      const double cf = grid_moment(*sol.fine_grid, sol.fine_wavefunctions[n], 1, sol.fine_wavefunctions[0]);
      c2 = richardson(c2, cf * cf);
    }
    const double c = std::copysign(std::sqrt(std::max(0.0, c2)), cc);
    const double d = n == 0 ? 0.0 : 2.0 * std::max(0.0, c2) * (sol.energies[n] - sol.energies[0]);
    p.c.push_back(c);
    p.d.push_back(d);
    total += d;
  }
  p.residual = 1.0 - total;
  return p;
}

double two_particle_first_order_gap(const SpectralSolution& one, const BivariatePolynomial& f) {
  if (one.states() < 2) throw ConfigError("two one-particle states are required");
  // <ab|F|cd> = sum f_ij <a|phi^i|c> <b|phi^j|d>
  auto element = [&](int a, int b, int c, int d) {
    double acc = 0.0;
    for (const auto& [key, coeff] : f.terms())
      acc += coeff * matrix_element(one, a, key.first, c) * matrix_element(one, b, key.second, d);
    return acc;
  };
  const double ground = element(0, 0, 0, 0);
  const double sym = 0.5 * (element(0, 1, 0, 1) + element(0, 1, 1, 0) + element(1, 0, 0, 1) + element(1, 0, 1, 0));
  return one.energies[1] - one.energies[0] + sym - ground;
}

double two_particle_first_order_gap(double lambda0, const Interaction& f) {
  const SpectralSolution one =
      solve_schrodinger_1d(make_standard_potential(WellKind::double_well, lambda0), default_oracle_grid(), 2);
  return two_particle_first_order_gap(one, interaction_polynomial(f));
}

}  // namespace nprg
