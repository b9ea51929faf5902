#pragma once

// Pieces of the D = 1 LPA Wegner-Houghton flow shared by the grid and the
// coupling solvers:
//
//   Lambda dV/dLambda = -(Lambda / 2 pi) log(1 + V''/Lambda^2).
//
// Flows are integrated in s = ln(Lambda0 / Lambda). The two tail integrals
// close the finite window [Lambda_IR, Lambda0] with the curvature frozen:
// the UV tail is added to the bare potential at Lambda0 and the IR tail to the
// vacuum energy at Lambda_IR.

#include <array>
#include <cmath>
#include <numbers>

namespace nprg {

/// A_1 / 2 with A_1 = 1/pi: the shell-integral prefactor in one dimension.
inline constexpr double kLoopFactor = 0.5 / std::numbers::pi;

/// A flow that stalls with a log argument below this has run into the
/// spinodal even if the guard itself was never crossed.
inline constexpr double kSpinodalProximity = 1e-3;

/// (1/2pi) * integral_{lambda0}^{inf} log(1 + c/L^2) dL, defined for c > -lambda0^2.
double uv_tail(double curvature, double lambda0);

/// (1/2pi) * integral_0^{lambda} log(1 + c/L^2) dL, defined for c >= 0.
double ir_tail(double curvature, double lambda);

/// 48-point Gauss-Legendre rule on [0, 1].
struct GaussLegendre01 {
  static constexpr int size = 48;
  std::array<double, size> nodes{};
  std::array<double, size> weights{};
  static const GaussLegendre01& instance();
};

/// UV tail of a series-valued log argument by quadrature in t = lambda0 / L:
///   (1/2pi) * integral_0^1 lambda0 t^-2 log_term(t^2 / lambda0^2) dt,
/// where log_term(w) returns log(1 + w * curvature) (or log det) as a series.
template <typename SeriesT, typename LogTerm>
SeriesT uv_tail_quadrature(double lambda0, const SeriesT& zero, LogTerm&& log_term) {
  const auto& rule = GaussLegendre01::instance();
  SeriesT acc = zero;
  for (int q = 0; q < GaussLegendre01::size; ++q) {
    const double t = rule.nodes[q];
    const double w = t * t / (lambda0 * lambda0);
    acc += log_term(w) * (rule.weights[q] * lambda0 / (t * t));
  }
  return acc * kLoopFactor;
}

}  // namespace nprg
