#pragma once

#include <utility>
#include <variant>

#include "nprg/coupling_flow.hpp"
#include "nprg/grid_flow.hpp"
#include "nprg/polynomial.hpp"
#include "nprg/series.hpp"

namespace nprg {

/// The infrared potential, sampled (grid flow) or truncated (coupling flow),
/// behind one evaluation interface. Grid derivatives come from a least-squares
/// quartic over an 11-node window around the nearest node.
class EffectivePotential {
public:
  static EffectivePotential from_grid(GridPotential v);
  static EffectivePotential from_couplings(CouplingVector c, double validity_radius = 1.5);
  /// A closed-form potential taken as already fully flowed (lambda = 0 unless given).
  static EffectivePotential from_polynomial(Polynomial1D p, double lambda = 0.0, double validity_radius = 1e6);

  double lambda() const { return lambda_; }
  double value(double x) const { return derivative(x, 0); }
  double derivative(double x, int order) const;  // order 0..4
  /// Interval on which the representation is trusted.
  std::pair<double, double> domain() const;
  /// Truncation order for coupling potentials, -1 otherwise.
  int truncation_order() const;
  /// Polynomial in the original coordinate; throws DomainError for grids.
  Polynomial1D polynomial() const;
  bool is_grid() const { return std::holds_alternative<GridPotential>(repr_); }
  const GridPotential* grid() const { return std::get_if<GridPotential>(&repr_); }

private:
  using Repr = std::variant<GridPotential, CouplingVector, Polynomial1D>;
  EffectivePotential(Repr r, double lambda, double center, double radius)
      : repr_(std::move(r)), lambda_(lambda), center_(center), radius_(radius) {}

  Repr repr_;
  double lambda_;
  double center_;  // expansion point (coupling and polynomial forms)
  double radius_;
};

struct ObservableSet {
  double x_vev = 0.0;       // <x>
  double e0 = 0.0;          // ground-state energy
  double m_eff = 0.0;       // Delta E = sqrt(V''(<x>))
  double lambda_eff = 0.0;  // quartic coefficient V''''(<x>)/4!, same normalization as lambda0
  double m1 = 0.0;
  double m2 = 0.0;
  double m4_connected = 0.0;
  double m4 = 0.0;
  bool moments_defined = true;  // false when m_eff == 0
};

/// Global minimizer of the effective potential. Grid: minimal node refined by
/// the local quartic fit; throws DomainTooSmallError if the minimum sits
/// within the fit window of the boundary. Couplings: lowest local minimum
/// inside the validity radius.
double locate_vacuum(const EffectivePotential& v);

struct ExtractionOptions {
  bool ir_completion = true;  // add the frozen-curvature tail below lambda to E0
};

/// E0 = V(<x>), m_eff = sqrt V'', M2 = 1/(2 m_eff),
/// M4 = -3 lambda_eff / (4 m_eff^5) + 3 M2^2, M1 = <x>.
/// Throws ExtractionError on negative curvature at the vacuum.
ObservableSet extract_observables(const EffectivePotential& v, const ExtractionOptions& opt = {});

/// Uses the last snapshot of a completed flow. For an early stop at
/// lambda_stop the snapshot is accepted only if lambda_stop < 0.05 m_eff.
ObservableSet extract_from_trajectory(const FlowTrajectory& traj, const ExtractionOptions& opt = {});
ObservableSet extract_from_trajectory(const CouplingTrajectory& traj, const ExtractionOptions& opt = {});

/// Two-variable effective potential in the (x1, x2) coordinates.
struct EffectivePotential2 {
  Series2 v;  // monomial coefficients around the origin
  double lambda = 0.0;
};

struct TwoFieldVacuum {
  double x1 = 0.0;
  double x2 = 0.0;
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
};

/// Joint stationary point reached by Newton iteration from the origin.
/// Throws ExtractionError if the Hessian there is not positive semidefinite.
TwoFieldVacuum locate_two_field_vacuum(const EffectivePotential2& v);

/// sqrt(d^2 V / dx2^2) at the vacuum.
double two_field_gap(const EffectivePotential2& v);

}  // namespace nprg
