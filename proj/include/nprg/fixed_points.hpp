#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nprg/coupling_flow.hpp"

namespace nprg {

/// Jacobian of beta_dimensionless at ahat, by central differences.
Eigen::MatrixXd beta_dimensionless_jacobian(const Eigen::VectorXd& ahat);

/// Seed lattice for the fixed-point search. ranges[k] spans ahat_{2k+2}
/// (ahat_2, ahat_4, ...); couplings without a range are seeded at zero.
struct SearchBox {
  std::vector<std::pair<double, double>> ranges;
  int seeds_per_axis = 8;
  bool even_sector = true;  // keep odd couplings at zero
};

struct FixedPoint {
  Eigen::VectorXd ahat;
  Eigen::VectorXcd eigenvalues;  // of the full (N+1) x (N+1) linearization
  int relevant = 0;              // eigenvalues with positive real part
  bool gaussian = false;

  /// "gaussian" or "nontrivial", with the count of relevant directions.
  std::string classification() const;
};

/// Damped Newton (at most 60 iterations per seed) from every lattice seed,
/// deduplicated at 1e-8 in the ahat norm, sorted by ahat_2. The Gaussian
/// point is always probed. No convergence anywhere gives an empty list.
std::vector<FixedPoint> find_fixed_points(int order, const SearchBox& box);

/// symmetric: ahat_2 grows past the threshold. false_broken: captured at the
/// ahat_2 -> -1 pole. diverged: higher couplings blow up at finite t with
/// ahat_2 away from the pole. undecided: none of these by t_max.
enum class Phase { symmetric, false_broken, diverged, undecided };
std::string to_string(Phase p);

struct FlowDiagramConfig {
  int order = 4;
  std::pair<double, double> a2_range{-1.0, 0.0};
  std::pair<double, double> a4_range{0.0, 5.0};
  int seeds_a2 = 20;
  int seeds_a4 = 20;
  double t_max = 20.0;
  double sample_dt = 0.1;
  double symmetric_threshold = 100.0;  // ahat_2 above this counts as the massive phase
  bool keep_samples = false;
  int jobs = 1;  // worker threads; results are merged in seed order
};

struct SeedTrajectory {
  double a2 = 0.0;
  double a4 = 0.0;
  Phase phase = Phase::undecided;
  double t_end = 0.0;
  std::vector<DimlessCouplingVector> samples;
};

struct FlowDiagram {
  FlowDiagramConfig config;
  std::vector<SeedTrajectory> seeds;  // row-major: a2 fastest

  double fraction(Phase p) const;
};

/// Seeds sit at cell centres of the (ahat_2, ahat_4) box with all other
/// couplings zero, and flow towards the infrared (increasing t). A flow
/// captured at ahat_2 -> -1 is the false broken phase.
SeedTrajectory classify_seed(int order, double a2, double a4, const FlowDiagramConfig& cfg);
FlowDiagram compute_flow_diagram(const FlowDiagramConfig& cfg);

}  // namespace nprg
