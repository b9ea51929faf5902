#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "nprg/series.hpp"

namespace nprg::testing {

// Lambda da_n/dLambda for n = 0..4, written out term by term.
inline Eigen::VectorXd hand_beta_0_to_4(const Eigen::VectorXd& a, double lambda) {
  auto at = [&](int n) { return n < a.size() ? a(n) : 0.0; };
  const double pre = -lambda / (2.0 * std::numbers::pi);
  const double m = lambda * lambda + at(2);
  const double a3 = at(3), a4 = at(4), a5 = at(5), a6 = at(6);
  Eigen::VectorXd b(5);
  b(0) = pre * std::log(m / (lambda * lambda));
  b(1) = pre * (a3 / m);
  b(2) = pre * (a4 / m - a3 * a3 / (m * m));
  b(3) = pre * (a5 / m - 3.0 * a4 * a3 / (m * m) + 2.0 * std::pow(a3, 3) / std::pow(m, 3));
  b(4) = pre * (a6 / m - 4.0 * a5 * a3 / (m * m) - 3.0 * a4 * a4 / (m * m) + 12.0 * a4 * a3 * a3 / std::pow(m, 3) -
                6.0 * std::pow(a3, 4) / std::pow(m, 4));
  return b;
}

// exp of a truncated series by the power series of exp(w), w = u - u_0.
inline Series series_exp(const Series& u) {
  const int n = u.order();
  Series w = u;
  w[0] = 0.0;
  Series acc = Series::constant(n, 1.0);
  Series term = Series::constant(n, 1.0);
  for (int k = 1; k <= n; ++k) {
    term = term * w * (1.0 / k);
    acc += term;
  }
  return acc * std::exp(u[0]);
}

}  // namespace nprg::testing
