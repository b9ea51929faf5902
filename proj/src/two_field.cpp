#include "nprg/two_field.hpp"

#include <cmath>

#include "nprg/dense_system.hpp"
#include "nprg/errors.hpp"
#include "nprg/lpa_kernel.hpp"

namespace nprg {

namespace {

// Monomials carried by the ODE state. The flow preserves x1 -> -x1 and
// x2 -> -x2 parity separately, so odd powers are dropped when the bare
// potential has none.
struct Layout {
  int order = 0;
  std::vector<std::pair<int, int>> terms;

  Layout(const Series2& v0) : order(v0.order()) {
    bool even1 = true, even2 = true;
    for (int i = 0; i <= order; ++i)
      for (int j = 0; i + j <= order; ++j) {
        if (v0(i, j) == 0.0) continue;
        if (i % 2) even1 = false;
        if (j % 2) even2 = false;
      }
    for (int i = 0; i <= order; ++i)
      for (int j = 0; i + j <= order; ++j)
        if (!(even1 && i % 2) && !(even2 && j % 2)) terms.emplace_back(i, j);
  }

  Vec pack(const Series2& s) const {
    Vec y(static_cast<Eigen::Index>(terms.size()));
    for (std::size_t k = 0; k < terms.size(); ++k) y(k) = s(terms[k].first, terms[k].second);
    return y;
  }

  Series2 unpack(const Vec& y) const {
    Series2 s(order);
    for (std::size_t k = 0; k < terms.size(); ++k) s.set(terms[k].first, terms[k].second, y(k));
    return s;
  }
};

struct Hessian {
  Series2 h11, h12, h22;
};

Hessian hessian_of(const Series2& v) {
  const Series2 d1 = v.derivative(0);
  const Series2 d2 = v.derivative(1);
  return {d1.derivative(0), d1.derivative(1), d2.derivative(1)};
}

// det(I + w H) - 1, truncated.
Series2 det_minus_one(const Hessian& h, double w) {
  const Series2 a = h.h11 * w;
  const Series2 b = h.h22 * w;
  const Series2 c = h.h12 * w;
  return a + b + a * b - c * c;
}

}  // namespace

Series2 series_from_bivariate(const BivariatePolynomial& p, int order) {
  Series2 s(order);
  for (const auto& [key, c] : p.terms()) {
    if (key.first + key.second > order) throw ConfigError("bivariate polynomial exceeds the truncation order");
    s.add(key.first, key.second, c);
  }
  return s;
}

Series2 beta_couplings_two_field(const Series2& v, double lambda, double guard) {
  const Hessian h = hessian_of(v);
  const double w = 1.0 / (lambda * lambda);
  const Series2 u = det_minus_one(h, w);
  if (!(1.0 + h.h11(0, 0) * w > guard) || !(1.0 + u(0, 0) > guard))
    throw SpinodalError(lambda, 0.0, "beta_couplings_two_field: determinant at the mass pole");
  return series_log1p(u) * (-kLoopFactor * lambda);
}

Series2 uv_completed_two_field(const Series2& v, double lambda0) {
  const Hessian h = hessian_of(v);
  const double w0 = 1.0 / (lambda0 * lambda0);
  if (!(1.0 + h.h11(0, 0) * w0 > 0.0) || !(1.0 + det_minus_one(h, w0)(0, 0) > 0.0))
    throw DomainError("uv_completed_two_field: Hessian below -lambda0^2");
  return v + uv_tail_quadrature(lambda0, Series2(v.order()),
                                [&](double w) { return series_log1p(det_minus_one(h, w)); });
}

TwoFieldTrajectory evolve_two_field(const Series2& v0, const FlowConfig& cfg) {
  cfg.validate();
  const int order = v0.order();
  if (order < 2) throw ConfigError("truncation order must be at least 2");

  const Series2 start = cfg.uv_completion ? uv_completed_two_field(v0, cfg.lambda0) : v0;
  const Layout layout(v0);
  beta_couplings_two_field(start, cfg.lambda0, cfg.spinodal_guard);  // precondition

  const double lambda0 = cfg.lambda0;
  const double guard = cfg.spinodal_guard;
  DenseSystem sys([=, &layout](double s, const Vec& y, Vec& dy) -> std::optional<DomainViolation> {
    const double l = lambda0 * std::exp(-s);
    const double w = 1.0 / (l * l);
    const Hessian h = hessian_of(layout.unpack(y));
    const Series2 u = det_minus_one(h, w);
    const double a11 = 1.0 + h.h11(0, 0) * w;
    const double det = 1.0 + u(0, 0);
    if (!(a11 > guard)) return DomainViolation{s, 0, a11};
    if (!(det > guard)) return DomainViolation{s, 0, det};
    dy = layout.pack(series_log1p(u) * (kLoopFactor * l));
    if (!dy.allFinite()) return DomainViolation{s, 0, det};
    return std::nullopt;
  });

  TwoFieldTrajectory traj;
  traj.snapshots.push_back({start, lambda0});

  std::vector<double> stops;
  for (double l : cfg.schedule()) stops.push_back(std::log(lambda0 / l));
  const double s_end = std::log(lambda0 / cfg.lambda_ir);

  StepControl ctl;
  ctl.rel_tol = cfg.rel_tol;
  ctl.abs_tol = cfg.abs_tol;
  ctl.max_steps = cfg.max_steps;

  Vec y = layout.pack(start);
  auto lambda_at = [&](double s) { return std::abs(s - s_end) < 1e-12 ? cfg.lambda_ir : lambda0 * std::exp(-s); };
  auto record = [&](double s, const Vec& state) { traj.snapshots.push_back({layout.unpack(state), lambda_at(s)}); };
  const IntegrationResult res = integrate_rosenbrock<Eigen::MatrixXd>(sys, 0.0, s_end, y, ctl, stops, record);
  traj.steps = res.accepted;

  const double l_stop = lambda0 * std::exp(-res.s_reached);
  switch (res.status) {
    case IntegrationResult::Status::completed:
      traj.termination = {Termination::Kind::completed, cfg.lambda_ir, 0.0};
      return traj;
    case IntegrationResult::Status::domain_violation:
      traj.termination = {Termination::Kind::spinodal, lambda0 * std::exp(-res.violation->s), 0.0};
      break;
    case IntegrationResult::Status::step_underflow:
    case IntegrationResult::Status::max_steps:
      traj.termination = {Termination::Kind::step_underflow, l_stop, 0.0};
      break;
  }
  if (traj.snapshots.back().lambda > l_stop) traj.snapshots.push_back({layout.unpack(y), l_stop});
  return traj;
}

}  // namespace nprg
