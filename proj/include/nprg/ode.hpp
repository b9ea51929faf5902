#pragma once

// Adaptive linearly-implicit Runge-Kutta (Rosenbrock 2(3), the ode23s
// scheme of Shampine & Reichelt) for the RG flows. The flows are stiff near
// the spinodal 1 + V''/Lambda^2 -> 0, which rules out explicit stepping at
// useful step sizes.
//
// A System provides
//   std::optional<DomainViolation> rhs(double s, const Vec& y, Vec& dy) const;
//   void jacobian(double s, const Vec& y, Matrix& jac) const;
//   void time_derivative(double s, const Vec& y, Vec& dfds) const;
// where Matrix is Eigen::MatrixXd or Eigen::SparseMatrix<double>. A domain
// violation in a trial stage rejects the step; it only ends the integration
// once the step size has collapsed.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace nprg {

using Vec = Eigen::VectorXd;

struct DomainViolation {
  double s = 0.0;
  Eigen::Index index = 0;  // component where the guard tripped
  double value = 0.0;      // offending log argument
};

struct StepControl {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double initial_step = 1e-4;
  double min_step = 1e-14;
  double max_step = 0.25;
  long max_steps = 2'000'000;
  // Creeping towards a singularity: this many consecutive attempts with a
  // step below stall_step count as step underflow.
  double stall_step = 1e-9;
  long stall_limit = 2000;
  // Pinned against the domain guard: at least violation_limit domain
  // rejections within one window of attempts ends the run as a violation.
  long violation_window = 1000;
  long violation_limit = 300;
};

struct IntegrationResult {
  enum class Status { completed, domain_violation, step_underflow, max_steps };
  Status status = Status::completed;
  double s_reached = 0.0;
  long accepted = 0;
  long rejected = 0;
  std::optional<DomainViolation> violation;
};

namespace detail {

template <typename Matrix>
struct LinearSolver;

template <>
struct LinearSolver<Eigen::MatrixXd> {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  bool factor(const Eigen::MatrixXd& jac, double hd) {
    const Eigen::Index n = jac.rows();
    lu.compute(Eigen::MatrixXd::Identity(n, n) - hd * jac);
    return std::isfinite(lu.rcond()) && lu.rcond() > 1e-300;
  }
  Vec solve(const Vec& b) const { return lu.solve(b); }
};

template <>
struct LinearSolver<Eigen::SparseMatrix<double>> {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool analyzed = false;
  bool factor(const Eigen::SparseMatrix<double>& jac, double hd) {
    Eigen::SparseMatrix<double> id(jac.rows(), jac.cols());
    id.setIdentity();
    Eigen::SparseMatrix<double> w = id - hd * jac;
    w.makeCompressed();
    if (!analyzed) {
      lu.analyzePattern(w);
      analyzed = true;
    }
    lu.factorize(w);
    return lu.info() == Eigen::Success;
  }
  Vec solve(const Vec& b) { return lu.solve(b); }
};

}  // namespace detail

/// Integrates y' = f(s, y) from s0 to s1 (s1 > s0). Every entry of `stops`
/// inside (s0, s1] is hit exactly and reported through on_stop(s, y).
template <typename Matrix, typename System>
IntegrationResult integrate_rosenbrock(const System& sys, double s0, double s1, Vec& y, const StepControl& ctl,
                                       const std::vector<double>& stops,
                                       const std::function<void(double, const Vec&)>& on_stop) {
  const double d = 1.0 / (2.0 + std::sqrt(2.0));
  const double e32 = 6.0 + std::sqrt(2.0);

  IntegrationResult res;
  const Eigen::Index n = y.size();
  Vec f0(n), f1(n), f2(n), dfds(n), k1(n), k2(n), k3(n), ynew(n), ymid(n);
  Matrix jac;
  detail::LinearSolver<Matrix> solver;

  double s = s0;
  if (auto v = sys.rhs(s, y, f0)) {
    res.status = IntegrationResult::Status::domain_violation;
    res.violation = v;
    res.s_reached = s;
    return res;
  }

  std::vector<double> targets;
  for (double t : stops)
    if (t > s0 && t < s1) targets.push_back(t);
  targets.push_back(s1);
  std::sort(targets.begin(), targets.end());
  std::size_t next_target = 0;

  double h = std::min(ctl.initial_step, s1 - s0);
  bool have_jac = false;
  std::optional<DomainViolation> last_violation;

  long tiny_run = 0;
  long window_attempts = 0;
  long window_violations = 0;

  auto weight = [&](double a, double b) {
    return ctl.abs_tol + ctl.rel_tol * std::max(std::abs(a), std::abs(b));
  };

  while (next_target < targets.size()) {
    if (res.accepted + res.rejected >= ctl.max_steps) {
      res.status = IntegrationResult::Status::max_steps;
      res.s_reached = s;
      return res;
    }
    const double target = targets[next_target];
    bool hits_target = false;
    double step = h;
    tiny_run = step < ctl.stall_step ? tiny_run + 1 : 0;
    if (tiny_run > ctl.stall_limit) {
      res.status = last_violation ? IntegrationResult::Status::domain_violation : IntegrationResult::Status::step_underflow;
      res.violation = last_violation;
      res.s_reached = s;
      return res;
    }
    if (s + step >= target - 1e-14 * std::max(1.0, std::abs(target))) {
      step = target - s;
      hits_target = true;
    }

    if (!have_jac) {
      sys.jacobian(s, y, jac);
      sys.time_derivative(s, y, dfds);
      have_jac = true;
    }

    bool ok = solver.factor(jac, step * d);
    std::optional<DomainViolation> violation;
    double err = 0.0;
    if (ok) {
      k1 = solver.solve(f0 + step * d * dfds);
      ymid = y + 0.5 * step * k1;
      violation = sys.rhs(s + 0.5 * step, ymid, f1);
      if (!violation) {
        k2 = solver.solve(f1 - k1) + k1;
        ynew = y + step * k2;
        violation = sys.rhs(s + step, ynew, f2);
        if (!violation) {
          k3 = solver.solve(f2 - e32 * (k2 - f1) - 2.0 * (k1 - f0) + step * d * dfds);
          double acc = 0.0;
          for (Eigen::Index i = 0; i < n; ++i) {
            const double e = (step / 6.0) * (k1(i) - 2.0 * k2(i) + k3(i)) / weight(y(i), ynew(i));
            acc += e * e;
          }
          err = std::sqrt(acc / static_cast<double>(n));
          if (!std::isfinite(err)) ok = false;
        }
      }
    }

    if (++window_attempts > ctl.violation_window) window_attempts = window_violations = 0;
    if (!ok || violation || err > 1.0) {
      ++res.rejected;
      if (violation) {
        last_violation = violation;
        if (++window_violations >= ctl.violation_limit) {
          res.status = IntegrationResult::Status::domain_violation;
          res.violation = violation;
          res.s_reached = s;
          return res;
        }
      }
      const double shrink = (!ok || violation || !std::isfinite(err)) ? 0.25 : std::max(0.2, 0.9 * std::cbrt(1.0 / err));
      h = step * shrink;
      if (h < ctl.min_step) {
        res.s_reached = s;
        if (last_violation) {
          res.status = IntegrationResult::Status::domain_violation;
          res.violation = last_violation;
        } else {
          res.status = IntegrationResult::Status::step_underflow;
        }
        return res;
      }
      continue;
    }

    ++res.accepted;
    last_violation.reset();
    s = hits_target ? target : s + step;
    y = ynew;
    f0 = f2;
    have_jac = false;
    const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::cbrt(1.0 / err));
    h = std::min(ctl.max_step, std::max(step, hits_target ? h : step) * grow);
    if (hits_target) {
      if (on_stop) on_stop(s, y);
      ++next_target;
    }
  }
  res.s_reached = s;
  return res;
}

}  // namespace nprg
