#include "nprg/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nprg/errors.hpp"
#include "nprg/lpa_kernel.hpp"
#include "nprg/potentials.hpp"

namespace nprg {

namespace {

constexpr int kFitWindow = 11;
constexpr int kFitHalf = kFitWindow / 2;

struct LocalFit {
  double center = 0.0;
  double h = 1.0;
  Polynomial1D q;  // in y = (x - center) / h

  double derivative(double x, int order) const {
    const Polynomial1D d = q.derivative(order);
    return d((x - center) / h) / std::pow(h, order);
  }
};

// Least-squares quartic through the 11 nodes nearest to node i.
LocalFit fit_quartic(const GridPotential& v, int i) {
  const int n = v.grid.points();
  if (n < kFitWindow) throw DomainTooSmallError("grid has fewer nodes than the fit window");
  const int first = std::clamp(i - kFitHalf, 0, n - kFitWindow);
  LocalFit fit;
  fit.h = v.grid.spacing();
  fit.center = v.grid.x(i);
  Eigen::MatrixXd a(kFitWindow, 5);
  Eigen::VectorXd b(kFitWindow);
  for (int r = 0; r < kFitWindow; ++r) {
    const double y = (v.grid.x(first + r) - fit.center) / fit.h;
    double p = 1.0;
    for (int c = 0; c < 5; ++c, p *= y) a(r, c) = p;
    b(r) = v.values(first + r);
  }
  fit.q = Polynomial1D(Eigen::VectorXd(a.colPivHouseholderQr().solve(b)));
  return fit;
}

int nearest_node(const Grid1D& g, double x) {
  const int i = static_cast<int>(std::lround((x - g.x_min()) / g.spacing()));
  return std::clamp(i, 0, g.points() - 1);
}

}  // namespace

EffectivePotential EffectivePotential::from_grid(GridPotential v) {
  const double lambda = v.lambda;
  return EffectivePotential(std::move(v), lambda, 0.0, 0.0);
}

EffectivePotential EffectivePotential::from_couplings(CouplingVector c, double validity_radius) {
  const double lambda = c.lambda;
  const double center = c.expansion_point;
  return EffectivePotential(std::move(c), lambda, center, validity_radius);
}

EffectivePotential EffectivePotential::from_polynomial(Polynomial1D p, double lambda, double validity_radius) {
  return EffectivePotential(std::move(p), lambda, 0.0, validity_radius);
}

double EffectivePotential::derivative(double x, int order) const {
  if (order < 0 || order > 4) throw ConfigError("derivative order must be in 0..4");
  if (const auto* g = std::get_if<GridPotential>(&repr_)) {
    if (x < g->grid.x_min() || x > g->grid.x_max()) throw DomainError("point outside the grid");
    return fit_quartic(*g, nearest_node(g->grid, x)).derivative(x, order);
  }
  if (const auto* c = std::get_if<CouplingVector>(&repr_)) {
    const Polynomial1D q = polynomial_from_couplings(*c).derivative(order);
    return q(x - center_);
  }
  return std::get<Polynomial1D>(repr_).derivative(order)(x);
}

std::pair<double, double> EffectivePotential::domain() const {
  if (const auto* g = std::get_if<GridPotential>(&repr_)) return {g->grid.x_min(), g->grid.x_max()};
  return {center_ - radius_, center_ + radius_};
}

Polynomial1D EffectivePotential::polynomial() const {
  if (const auto* c = std::get_if<CouplingVector>(&repr_)) return polynomial_from_couplings(*c).shifted(-center_);
  if (const auto* p = std::get_if<Polynomial1D>(&repr_)) return *p;
  throw DomainError("grid potentials have no global polynomial form");
}

int EffectivePotential::truncation_order() const {
  if (const auto* c = std::get_if<CouplingVector>(&repr_)) return c->order();
  return -1;
}

double locate_vacuum(const EffectivePotential& v) {
  if (const GridPotential* g = v.grid()) {
    const int n = g->grid.points();
    Eigen::Index imin = 0;
    g->values.minCoeff(&imin);
    const int i = static_cast<int>(imin);
    if (i < kFitHalf || i > n - 1 - kFitHalf)
      throw DomainTooSmallError("minimum of the effective potential lies at the grid boundary");
    const LocalFit fit = fit_quartic(*g, i);
    double best_y = 0.0;
    double best = fit.q(0.0);
    for (double y : real_roots(fit.q.derivative())) {
      if (std::abs(y) > 1.0) continue;
      if (fit.q(y) < best) {
        best = fit.q(y);
        best_y = y;
      }
    }
    return fit.center + best_y * fit.h;
  }

  const auto [lo, hi] = v.domain();
  const Polynomial1D p = v.polynomial();
  double best_x = std::numeric_limits<double>::quiet_NaN();
  double best = std::numeric_limits<double>::infinity();
  for (double x : real_roots(p.derivative())) {
    if (x < lo || x > hi || p.derivative(2)(x) < 0.0) continue;
    if (p(x) < best) {
      best = p(x);
      best_x = x;
    }
  }
  if (!std::isfinite(best_x)) throw ExtractionError("no local minimum inside the validity radius");
  return best_x;
}

ObservableSet extract_observables(const EffectivePotential& v, const ExtractionOptions& opt) {
  ObservableSet o;
  o.x_vev = locate_vacuum(v);
  const double v0 = v.value(o.x_vev);
  double v2 = v.derivative(o.x_vev, 2);
  const double v4 = v.derivative(o.x_vev, 4);
  const double noise = 1e-12 * std::max({1.0, std::abs(v0), std::abs(v4)});
  if (v2 < -noise) throw ExtractionError("negative curvature at the vacuum");
  if (v2 < noise) v2 = 0.0;

  o.e0 = v0;
  if (opt.ir_completion && v.lambda() > 0.0) o.e0 += ir_tail(v2, v.lambda());
  o.m_eff = std::sqrt(v2);
  o.lambda_eff = v4 / 24.0;
  o.m1 = o.x_vev;
  if (o.m_eff == 0.0) {
    o.moments_defined = false;
    o.m2 = o.m4_connected = o.m4 = std::numeric_limits<double>::quiet_NaN();
    return o;
  }
  o.m2 = 0.5 / o.m_eff;
  o.m4_connected = -3.0 * o.lambda_eff / (4.0 * std::pow(o.m_eff, 5));
  o.m4 = o.m4_connected + 3.0 * o.m2 * o.m2;
  return o;
}

namespace {

template <typename Traj, typename Make>
ObservableSet extract_last(const Traj& traj, const ExtractionOptions& opt, Make make) {
  if (traj.snapshots.empty()) throw ExtractionError("empty trajectory");
  if (traj.termination.completed()) return extract_observables(make(traj.last()), opt);
  ObservableSet o;
  try {
    o = extract_observables(make(traj.last()), opt);
  } catch (const ExtractionError& e) {
    throw ExtractionError("flow stopped at " + traj.termination.describe() + ": " + e.what());
  }
  const double l_stop = traj.last().lambda;
  if (!(o.moments_defined && l_stop < 0.05 * o.m_eff))
    throw ExtractionError("flow stopped at " + traj.termination.describe() +
                          " before the scale fell below 0.05 m_eff");
  return o;
}

}  // namespace

ObservableSet extract_from_trajectory(const FlowTrajectory& traj, const ExtractionOptions& opt) {
  return extract_last(traj, opt, [](const GridPotential& g) { return EffectivePotential::from_grid(g); });
}

ObservableSet extract_from_trajectory(const CouplingTrajectory& traj, const ExtractionOptions& opt) {
  return extract_last(traj, opt, [](const CouplingVector& c) { return EffectivePotential::from_couplings(c); });
}

TwoFieldVacuum locate_two_field_vacuum(const EffectivePotential2& v) {
  const Series2 g1 = v.v.derivative(0);
  const Series2 g2 = v.v.derivative(1);
  const Series2 h11 = g1.derivative(0);
  const Series2 h12 = g1.derivative(1);
  const Series2 h22 = g2.derivative(1);
  auto hessian = [&](const Eigen::Vector2d& x) {
    Eigen::Matrix2d h;
    h << h11.evaluate(x(0), x(1)), h12.evaluate(x(0), x(1)), h12.evaluate(x(0), x(1)), h22.evaluate(x(0), x(1));
    return h;
  };
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    const Eigen::Vector2d grad(g1.evaluate(x(0), x(1)), g2.evaluate(x(0), x(1)));
    if (grad.norm() < 1e-13) {
      converged = true;
      break;
    }
    const Eigen::Vector2d step = hessian(x).fullPivLu().solve(grad);
    if (!step.allFinite()) break;
    x -= step;
    if (step.norm() < 1e-14 * std::max(1.0, x.norm())) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ExtractionError("two-field vacuum search did not converge");
  TwoFieldVacuum vac{x(0), x(1), hessian(x)};
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(vac.hessian);
  if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
    throw ExtractionError("two-field stationary point is not a minimum");
  return vac;
}

double two_field_gap(const EffectivePotential2& v) {
  const TwoFieldVacuum vac = locate_two_field_vacuum(v);
  return std::sqrt(std::max(0.0, vac.hessian(1, 1)));
}

}  // namespace nprg
