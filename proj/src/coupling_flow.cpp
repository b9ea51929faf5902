#include "nprg/coupling_flow.hpp"

#include <cmath>

#include "nprg/dense_system.hpp"
#include "nprg/errors.hpp"
#include "nprg/lpa_kernel.hpp"

namespace nprg {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// n! [log(1 + u)]_n for n = 0..N.
Eigen::VectorXd factorial_scaled_log(const Series& u) {
  const Series lg = series_log1p(u);
  Eigen::VectorXd out(u.order() + 1);
  for (int n = 0; n <= u.order(); ++n) out(n) = factorial(n) * lg[n];
  return out;
}

}  // namespace

CouplingVector couplings_from_polynomial(const Polynomial1D& p, int order, double lambda, double expansion_point) {
  if (order < 2) throw ConfigError("truncation order must be at least 2");
  const Polynomial1D q = expansion_point == 0.0 ? p : p.shifted(expansion_point);
  if (q.degree() > order) throw ConfigError("polynomial degree exceeds truncation order");
  CouplingVector c{lambda, Eigen::VectorXd::Zero(order + 1), expansion_point};
  for (int n = 0; n <= order; ++n) c.a(n) = factorial(n) * q.coeff(n);
  return c;
}

Polynomial1D polynomial_from_couplings(const CouplingVector& c) {
  Eigen::VectorXd coeffs(c.a.size());
  for (int n = 0; n < c.a.size(); ++n) coeffs(n) = c.a(n) / factorial(n);
  return Polynomial1D(coeffs);
}

Series scaled_curvature(const Eigen::VectorXd& a, double lambda) {
  const int order = static_cast<int>(a.size()) - 1;
  Series u(order);
  const double inv = 1.0 / (lambda * lambda);
  for (int k = 0; k + 2 <= order; ++k) u[k] = a(k + 2) * inv / factorial(k);
  return u;
}

Eigen::VectorXd beta_couplings(const CouplingVector& c, double guard) {
  const Series u = scaled_curvature(c.a, c.lambda);
  if (!(1.0 + u[0] > guard))
    throw SpinodalError(c.lambda, c.expansion_point, "beta_couplings: Lambda^2 + a_2 at the mass pole");
  return -kLoopFactor * c.lambda * factorial_scaled_log(u);
}

CouplingVector uv_completed(const CouplingVector& c, double lambda0) {
  const int order = c.order();
  Series curv(order);
  for (int k = 0; k + 2 <= order; ++k) curv[k] = c.a(k + 2) / factorial(k);
  if (!(curv[0] > -lambda0 * lambda0)) throw DomainError("uv_completed: curvature below -lambda0^2");
  const Series tail = uv_tail_quadrature(lambda0, Series(order), [&](double w) { return series_log1p(curv * w); });
  CouplingVector out = c;
  for (int n = 0; n <= order; ++n) out.a(n) += factorial(n) * tail[n];
  return out;
}

CouplingTrajectory evolve_couplings(const CouplingVector& c0, const FlowConfig& cfg) {
  cfg.validate();
  if (c0.order() < 2) throw ConfigError("truncation order must be at least 2");

  CouplingVector start = c0;
  start.lambda = cfg.lambda0;
  if (cfg.uv_completion) start = uv_completed(start, cfg.lambda0);
  beta_couplings(start, cfg.spinodal_guard);  // precondition

  const double lambda0 = cfg.lambda0;
  const double guard = cfg.spinodal_guard;
  DenseSystem sys([=](double s, const Vec& a, Vec& da) -> std::optional<DomainViolation> {
    const double l = lambda0 * std::exp(-s);
    const Series u = scaled_curvature(a, l);
    const double arg = 1.0 + u[0];
    if (!(arg > guard)) return DomainViolation{s, 2, arg};
    // d/ds = -Lambda d/dLambda
    da = kLoopFactor * l * factorial_scaled_log(u);
    if (!da.allFinite()) return DomainViolation{s, 2, arg};
    return std::nullopt;
  });

  CouplingTrajectory traj;
  traj.snapshots.push_back(start);

  std::vector<double> stops;
  for (double l : cfg.schedule()) stops.push_back(std::log(lambda0 / l));
  const double s_end = std::log(lambda0 / cfg.lambda_ir);

  StepControl ctl;
  ctl.rel_tol = cfg.rel_tol;
  ctl.abs_tol = cfg.abs_tol;
  ctl.max_steps = cfg.max_steps;

  Vec y = start.a;
  auto lambda_at = [&](double s) { return std::abs(s - s_end) < 1e-12 ? cfg.lambda_ir : lambda0 * std::exp(-s); };
  auto record = [&](double s, const Vec& state) {
    traj.snapshots.push_back({lambda_at(s), state, c0.expansion_point});
  };
  const IntegrationResult res = integrate_rosenbrock<Eigen::MatrixXd>(sys, 0.0, s_end, y, ctl, stops, record);
  traj.steps = res.accepted;

  const double l_stop = lambda0 * std::exp(-res.s_reached);
  switch (res.status) {
    case IntegrationResult::Status::completed:
      traj.termination = {Termination::Kind::completed, cfg.lambda_ir, c0.expansion_point};
      return traj;
    case IntegrationResult::Status::domain_violation:
      traj.termination = {Termination::Kind::spinodal, lambda0 * std::exp(-res.violation->s), c0.expansion_point,
                          true};
      break;
    case IntegrationResult::Status::step_underflow:
    case IntegrationResult::Status::max_steps: {
      const bool at_pole = 1.0 + y(2) / (l_stop * l_stop) < kSpinodalProximity;
      traj.termination = {at_pole ? Termination::Kind::spinodal : Termination::Kind::step_underflow, l_stop,
                          c0.expansion_point, at_pole};
      break;
    }
  }
  if (traj.snapshots.back().lambda > l_stop) traj.snapshots.push_back({l_stop, y, c0.expansion_point});
  return traj;
}

DimlessCouplingVector to_dimensionless(const CouplingVector& c, double lambda0) {
  DimlessCouplingVector d{std::log(lambda0 / c.lambda), Eigen::VectorXd(c.a.size())};
  for (int n = 0; n < c.a.size(); ++n) d.ahat(n) = c.a(n) * std::pow(c.lambda, -0.5 * (n + 2));
  return d;
}

CouplingVector to_dimensionful(const DimlessCouplingVector& d, double lambda0) {
  CouplingVector c{lambda0 * std::exp(-d.t), Eigen::VectorXd(d.ahat.size()), 0.0};
  for (int n = 0; n < d.ahat.size(); ++n) c.a(n) = d.ahat(n) * std::pow(c.lambda, 0.5 * (n + 2));
  return c;
}

Eigen::VectorXd beta_dimensionless(const DimlessCouplingVector& d) {
  const int order = d.order();
  Series u(order);
  for (int k = 0; k + 2 <= order; ++k) u[k] = d.ahat(k + 2) / factorial(k);
  if (!(1.0 + u[0] > 0.0)) throw DomainError("beta_dimensionless: ahat_2 <= -1");
  const Eigen::VectorXd lg = factorial_scaled_log(u);
  Eigen::VectorXd out(order + 1);
  for (int n = 0; n <= order; ++n) out(n) = 0.5 * (n + 2) * d.ahat(n) + kLoopFactor * lg(n);
  return out;
}

}  // namespace nprg
