#include "nprg/grid_flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Sparse>

#include "nprg/errors.hpp"
#include "nprg/lpa_kernel.hpp"
#include "nprg/ode.hpp"

namespace nprg {

Grid1D::Grid1D(double x_min, double x_max, int points) : x_min_(x_min), x_max_(x_max), points_(points) {
  if (!(x_min < x_max)) throw ConfigError("grid needs x_min < x_max");
  if (points < 5) throw ConfigError("grid needs at least 5 points");
}

Eigen::VectorXd Grid1D::nodes() const {
  Eigen::VectorXd x(points_);
  for (int i = 0; i < points_; ++i) x(i) = this->x(i);
  return x;
}

Grid1D Grid1D::widened(double factor) const {
  const double h = spacing();
  const double mid = 0.5 * (x_min_ + x_max_);
  const int half_intervals = static_cast<int>(std::ceil(factor * (points_ - 1) / 2.0));
  return Grid1D(mid - half_intervals * h, mid + half_intervals * h, 2 * half_intervals + 1);
}

Grid1D Grid1D::refined() const { return Grid1D(x_min_, x_max_, 2 * points_ - 1); }

void FlowConfig::validate() const {
  if (!(lambda_ir > 0.0 && lambda_ir < lambda0)) throw ConfigError("flow config needs 0 < lambda_ir < lambda0");
  if (!(rel_tol > 0.0 && abs_tol > 0.0)) throw ConfigError("flow tolerances must be positive");
  if (!(spinodal_guard > 0.0)) throw ConfigError("spinodal guard must be positive");
  if (max_steps < 1) throw ConfigError("max_steps must be positive");
}

std::vector<double> FlowConfig::schedule() const {
  std::vector<double> out{lambda0};
  if (snapshot_schedule.empty()) {
    const double decades = std::log10(lambda0 / lambda_ir);
    const int n = static_cast<int>(std::floor(4.0 * decades + 1e-9));
    for (int k = 1; k <= n; ++k) out.push_back(lambda0 * std::pow(10.0, -0.25 * k));
  } else {
    for (double l : snapshot_schedule)
      if (l < lambda0 && l > lambda_ir) out.push_back(l);
  }
  out.push_back(lambda_ir);
  std::sort(out.begin(), out.end(), std::greater<>());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }),
            out.end());
  return out;
}

std::string to_string(Termination::Kind kind) {
  switch (kind) {
    case Termination::Kind::completed: return "completed";
    case Termination::Kind::spinodal: return "spinodal";
    case Termination::Kind::step_underflow: return "step_underflow";
  }
  return "unknown";
}

std::string Termination::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  if (kind == Kind::spinodal) os << (mass_pole ? " (mass pole)" : "") << " at lambda=" << lambda << " x=" << x;
  if (kind == Kind::step_underflow) os << " at lambda=" << lambda;
  return os.str();
}

Eigen::VectorXd second_difference(const Eigen::VectorXd& v, double h) {
  const Eigen::Index n = v.size();
  const double inv = 1.0 / (h * h);
  Eigen::VectorXd d(n);
  // Neighbours summed first so mirrored inputs give bit-identical results.
  d.segment(1, n - 2) = ((v.segment(2, n - 2) + v.segment(0, n - 2)) - 2.0 * v.segment(1, n - 2)) * inv;
  d(0) = (2.0 * v(0) - 5.0 * v(1) + 4.0 * v(2) - v(3)) * inv;
  d(n - 1) = (2.0 * v(n - 1) - 5.0 * v(n - 2) + 4.0 * v(n - 3) - v(n - 4)) * inv;
  return d;
}

Eigen::VectorXd beta_grid(const GridPotential& v, double guard) {
  const Eigen::VectorXd d2 = second_difference(v.values, v.grid.spacing());
  const double l2 = v.lambda * v.lambda;
  Eigen::VectorXd out(d2.size());
  for (Eigen::Index i = 0; i < d2.size(); ++i) {
    const double arg = 1.0 + d2(i) / l2;
    if (!(arg > guard))
      throw SpinodalError(v.lambda, v.grid.x(static_cast<int>(i)), "beta_grid: log argument below spinodal guard");
    out(i) = -kLoopFactor * v.lambda * std::log(arg);
  }
  return out;
}

namespace {

// dV/ds = (Lambda/2pi) log(1 + D2 V / Lambda^2), Lambda = lambda0 e^{-s}.
class GridSystem {
public:
  GridSystem(const Grid1D& grid, double lambda0, double guard) : grid_(grid), lambda0_(lambda0), guard_(guard) {
    const int n = grid.points();
    const double inv = 1.0 / (grid.spacing() * grid.spacing());
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 1; i + 1 < n; ++i) {
      t.emplace_back(i, i - 1, inv);
      t.emplace_back(i, i, -2.0 * inv);
      t.emplace_back(i, i + 1, inv);
    }
    const double edge[4] = {2.0, -5.0, 4.0, -1.0};
    for (int k = 0; k < 4; ++k) {
      t.emplace_back(0, k, edge[k] * inv);
      t.emplace_back(n - 1, n - 1 - k, edge[k] * inv);
    }
    stencil_.resize(n, n);
    stencil_.setFromTriplets(t.begin(), t.end());
    stencil_.makeCompressed();
  }

  double lambda(double s) const { return lambda0_ * std::exp(-s); }

  std::optional<DomainViolation> rhs(double s, const Vec& y, Vec& dy) const {
    const double l = lambda(s);
    const double l2 = l * l;
    const Vec d2 = second_difference(y, grid_.spacing());
    dy.resize(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double arg = 1.0 + d2(i) / l2;
      if (!(arg > guard_)) return DomainViolation{s, i, arg};
      dy(i) = kLoopFactor * l * std::log(arg);
    }
    return std::nullopt;
  }

  void jacobian(double s, const Vec& y, Eigen::SparseMatrix<double>& jac) const {
    const double l = lambda(s);
    const Vec d2 = second_difference(y, grid_.spacing());
    Vec scale(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) scale(i) = kLoopFactor * l / std::max(l * l + d2(i), 1e-300);
    jac = scale.asDiagonal() * stencil_;
  }

  void time_derivative(double s, const Vec& y, Vec& out) const {
    const double l = lambda(s);
    const Vec d2 = second_difference(y, grid_.spacing());
    out.resize(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double u = d2(i) / (l * l);
      // d/ds = -Lambda d/dLambda at fixed curvature.
      out(i) = -l * kLoopFactor * (std::log1p(u) - 2.0 * u / (1.0 + u));
    }
  }

private:
  Grid1D grid_;
  double lambda0_;
  double guard_;
  Eigen::SparseMatrix<double> stencil_;
};

}  // namespace

FlowTrajectory evolve_grid(const Polynomial1D& v0, const Grid1D& grid, const FlowConfig& cfg) {
  cfg.validate();
  if (v0.degree() < 2 || v0.degree() % 2 != 0 || !(v0.leading() > 0.0))
    throw ConfigError("evolve_grid: bare potential must be bounded below");

  const Eigen::VectorXd x = grid.nodes();
  const Polynomial1D curv = v0.derivative(2);
  Eigen::VectorXd values(grid.points());
  for (int i = 0; i < grid.points(); ++i) {
    values(i) = v0(x(i));
    if (cfg.uv_completion) values(i) += uv_tail(curv(x(i)), cfg.lambda0);
  }

  FlowTrajectory traj;
  GridPotential start{grid, values, cfg.lambda0};
  beta_grid(start, cfg.spinodal_guard);  // precondition at lambda0
  traj.snapshots.push_back(start);

  const std::vector<double> sched = cfg.schedule();
  std::vector<double> stops;
  for (double l : sched) stops.push_back(std::log(cfg.lambda0 / l));
  const double s_end = std::log(cfg.lambda0 / cfg.lambda_ir);

  GridSystem sys(grid, cfg.lambda0, cfg.spinodal_guard);
  StepControl ctl;
  ctl.rel_tol = cfg.rel_tol;
  ctl.abs_tol = cfg.abs_tol;
  ctl.max_steps = cfg.max_steps;

  Vec y = values;
  auto record = [&](double s, const Vec& state) {
    // The last stop lands on lambda_ir exactly.
    const double l = (std::abs(s - s_end) < 1e-12) ? cfg.lambda_ir : sys.lambda(s);
    traj.snapshots.push_back({grid, state, l});
  };
  const IntegrationResult res =
      integrate_rosenbrock<Eigen::SparseMatrix<double>>(sys, 0.0, s_end, y, ctl, stops, record);
  traj.steps = res.accepted;

  const double l_stop = sys.lambda(res.s_reached);
  switch (res.status) {
    case IntegrationResult::Status::completed:
      traj.termination = {Termination::Kind::completed, cfg.lambda_ir, 0.0};
      return traj;
    case IntegrationResult::Status::domain_violation:
      traj.termination = {Termination::Kind::spinodal, sys.lambda(res.violation->s),
                          grid.x(static_cast<int>(res.violation->index))};
      break;
    case IntegrationResult::Status::step_underflow:
    case IntegrationResult::Status::max_steps: {
      const Eigen::VectorXd arg = 1.0 + second_difference(y, grid.spacing()).array() / (l_stop * l_stop);
      Eigen::Index i = 0;
      if (arg.minCoeff(&i) < kSpinodalProximity)
        traj.termination = {Termination::Kind::spinodal, l_stop, grid.x(static_cast<int>(i))};
      else
        traj.termination = {Termination::Kind::step_underflow, l_stop, 0.0};
      break;
    }
  }
  if (traj.snapshots.back().lambda > l_stop) traj.snapshots.push_back({grid, y, l_stop});
  return traj;
}

}  // namespace nprg
