#include "nprg/lpa_kernel.hpp"

#include <stdexcept>

#include "nprg/errors.hpp"

namespace nprg {

double uv_tail(double c, double lambda0) {
  if (c == 0.0) return 0.0;
  if (c > 0.0) {
    const double r = std::sqrt(c);
    return kLoopFactor * (2.0 * r * std::atan(r / lambda0) - lambda0 * std::log1p(c / (lambda0 * lambda0)));
  }
  const double b = std::sqrt(-c);
  if (!(b < lambda0)) throw DomainError("uv_tail: curvature below -lambda0^2");
  return kLoopFactor * (-2.0 * b * std::atanh(b / lambda0) - lambda0 * std::log1p(c / (lambda0 * lambda0)));
}

double ir_tail(double c, double lambda) {
  if (lambda <= 0.0 || c == 0.0) return 0.0;
  if (c < 0.0) throw DomainError("ir_tail: negative curvature");
  const double r = std::sqrt(c);
  return kLoopFactor * (lambda * std::log1p(c / (lambda * lambda)) + 2.0 * r * std::atan(lambda / r));
}

const GaussLegendre01& GaussLegendre01::instance() {
  static const GaussLegendre01 rule = [] {
    GaussLegendre01 g;
    const int n = size;
    for (int i = 0; i < n; ++i) {
      // Newton on P_n starting from the Chebyshev-like guess.
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      g.nodes[i] = 0.5 * (1.0 - x);
      g.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/((1-x^2)P'^2) halved for [0,1]
    }
    return g;
  }();
  return rule;
}

}  // namespace nprg
