#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nprg/grid_flow.hpp"
#include "nprg/polynomial.hpp"
#include "nprg/series.hpp"

namespace nprg {

/// Couplings a_0..a_N of V(phi) = sum a_n phi^n / n!, expanded around
/// `expansion_point` in the original coordinate.
struct CouplingVector {
  double lambda = 0.0;
  Eigen::VectorXd a;
  double expansion_point = 0.0;

  int order() const { return static_cast<int>(a.size()) - 1; }
};

/// Dimensionless couplings ahat_n = a_n Lambda^{-(n+2)/2} at t = ln(Lambda0/Lambda).
struct DimlessCouplingVector {
  double t = 0.0;
  Eigen::VectorXd ahat;

  int order() const { return static_cast<int>(ahat.size()) - 1; }
};

/// The one place the factorial convention lives: a_n = n! c_n.
CouplingVector couplings_from_polynomial(const Polynomial1D& p, int order, double lambda,
                                         double expansion_point = 0.0);
/// Inverse of couplings_from_polynomial (in the expansion variable phi).
Polynomial1D polynomial_from_couplings(const CouplingVector& c);

/// V''(phi) / Lambda^2 as a series of the flow's truncation order; a_{N+1},
/// a_{N+2} are taken as zero.
Series scaled_curvature(const Eigen::VectorXd& a, double lambda);

/// Lambda da_n/dLambda for n = 0..N, as n! times the phi^n coefficient of
/// -(Lambda/2pi) log(1 + V''/Lambda^2). Throws SpinodalError when
/// 1 + a_2/Lambda^2 <= guard (the mass pole).
Eigen::VectorXd beta_couplings(const CouplingVector& c, double guard = 0.0);

/// c with the frozen-curvature UV tail above lambda0 added to every coupling.
CouplingVector uv_completed(const CouplingVector& c, double lambda0);

struct CouplingTrajectory {
  std::vector<CouplingVector> snapshots;  // strictly decreasing lambda
  Termination termination;
  long steps = 0;

  const CouplingVector& last() const { return snapshots.back(); }
};

/// Integrates the truncated coupling ODEs from c0 (taken at cfg.lambda0) down
/// to cfg.lambda_ir. A mass-pole hit ends the flow with a spinodal termination
/// located at the expansion point.
CouplingTrajectory evolve_couplings(const CouplingVector& c0, const FlowConfig& cfg);

DimlessCouplingVector to_dimensionless(const CouplingVector& c, double lambda0);
CouplingVector to_dimensionful(const DimlessCouplingVector& d, double lambda0);

/// d ahat_n / dt = (n+2)/2 ahat_n + (1/2pi) n! [log(1 + uhat)]_n with
/// uhat_k = ahat_{k+2} / k!. No Lambda enters. Throws DomainError if ahat_2 <= -1.
Eigen::VectorXd beta_dimensionless(const DimlessCouplingVector& d);

}  // namespace nprg
