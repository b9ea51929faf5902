#pragma once

#include <vector>

#include "nprg/grid_flow.hpp"
#include "nprg/observables.hpp"
#include "nprg/polynomial.hpp"
#include "nprg/series.hpp"

namespace nprg {

/// Monomial coefficients of p truncated at total degree `order`.
/// Throws ConfigError if p has terms beyond it.
Series2 series_from_bivariate(const BivariatePolynomial& p, int order);

/// Lambda dV/dLambda = -(Lambda/2pi) log det(I + H/Lambda^2) as a series,
/// with the determinant expanded as (1 + H11~)(1 + H22~) - H12~^2.
/// Throws SpinodalError when 1 + H11~ or the determinant has a constant
/// term at or below `guard`.
Series2 beta_couplings_two_field(const Series2& v, double lambda, double guard = 0.0);

/// v with the frozen-Hessian UV tail above lambda0 added.
Series2 uv_completed_two_field(const Series2& v, double lambda0);

struct TwoFieldTrajectory {
  std::vector<EffectivePotential2> snapshots;  // strictly decreasing lambda
  Termination termination;
  long steps = 0;

  const EffectivePotential2& last() const { return snapshots.back(); }
};

/// Integrates the two-variable series flow from lambda0 to lambda_ir.
TwoFieldTrajectory evolve_two_field(const Series2& v0, const FlowConfig& cfg);

}  // namespace nprg
