#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>

#include "nprg/ode.hpp"

namespace nprg {

/// Small ODE system with a finite-difference Jacobian, for the coupling flows
/// (at most a few hundred unknowns).
class DenseSystem {
public:
  using Rhs = std::function<std::optional<DomainViolation>(double, const Vec&, Vec&)>;

  explicit DenseSystem(Rhs rhs) : rhs_(std::move(rhs)) {}

  std::optional<DomainViolation> rhs(double s, const Vec& y, Vec& dy) const { return rhs_(s, y, dy); }

  void jacobian(double s, const Vec& y, Eigen::MatrixXd& jac) const {
    const Eigen::Index n = y.size();
    Vec f0(n), f1(n);
    jac.setZero(n, n);
    if (rhs_(s, y, f0)) return;
    const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    Vec yp = y;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dj = root_eps * std::max(std::abs(y(j)), 1e-6);
      yp(j) = y(j) + dj;
      if (!rhs_(s, yp, f1)) jac.col(j) = (f1 - f0) / dj;
      yp(j) = y(j);
    }
  }

  void time_derivative(double s, const Vec& y, Vec& out) const {
    const Eigen::Index n = y.size();
    Vec f0(n), f1(n);
    out.setZero(n);
    const double ds = 1e-7 * std::max(1.0, std::abs(s));
    if (rhs_(s, y, f0) || rhs_(s + ds, y, f1)) return;
    out = (f1 - f0) / ds;
  }

private:
  Rhs rhs_;
};

}  // namespace nprg
