#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nprg/polynomial.hpp"

namespace nprg {

/// Uniform grid on [x_min, x_max] with `points` nodes.
class Grid1D {
public:
  Grid1D(double x_min, double x_max, int points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int points() const { return points_; }
  double spacing() const { return (x_max_ - x_min_) / (points_ - 1); }
  // Counted from the nearer end, so a grid symmetric about 0 has exactly mirrored nodes.
  double x(int i) const {
    return 2 * i < points_ - 1 ? x_min_ + i * spacing() : x_max_ - (points_ - 1 - i) * spacing();
  }
  Eigen::VectorXd nodes() const;

  // Same spacing, `factor` times the half-width (rounded to whole nodes).
  Grid1D widened(double factor) const;
  // Halved spacing on the same interval (2n - 1 nodes).
  Grid1D refined() const;

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

private:
  double x_min_;
  double x_max_;
  int points_;
};

struct GridPotential {
  Grid1D grid;
  Eigen::VectorXd values;
  double lambda = 0.0;
};

/// Settings shared by grid and coupling flows.
struct FlowConfig {
  double lambda0 = 100.0;
  double lambda_ir = 1e-3;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::vector<double> snapshot_schedule;  // Lambda values; empty means 4 per decade
  double spinodal_guard = 1e-10;
  long max_steps = 200'000;  // accepted plus rejected; exceeding it ends the flow as step_underflow
  bool uv_completion = true;  // add the frozen-curvature tail above lambda0 to V at lambda0

  void validate() const;
  // Decreasing Lambda values to record, always including lambda0 and lambda_ir.
  std::vector<double> schedule() const;
};

struct Termination {
  enum class Kind { completed, spinodal, step_underflow };
  Kind kind = Kind::completed;
  double lambda = 0.0;  // where the flow stopped
  double x = 0.0;       // spinodal location (grid node or expansion point)
  bool mass_pole = false;  // coupling flows: 1 + a_2/Lambda^2 -> 0 at the expansion point

  bool completed() const { return kind == Kind::completed; }
  std::string describe() const;
};

std::string to_string(Termination::Kind kind);

struct FlowTrajectory {
  std::vector<GridPotential> snapshots;  // strictly decreasing lambda
  Termination termination;
  long steps = 0;

  const GridPotential& last() const { return snapshots.back(); }
};

/// Central second differences; one-sided 4-point stencils at the two ends.
Eigen::VectorXd second_difference(const Eigen::VectorXd& values, double h);

/// Lambda dV/dLambda at each node. Throws SpinodalError carrying (lambda, x)
/// of the first node whose log argument is at or below `guard`.
Eigen::VectorXd beta_grid(const GridPotential& v, double guard = 1e-10);

/// Samples v0 on the grid (plus the UV tail if enabled) and integrates the
/// flow down to lambda_ir. On spinodal or step underflow the trajectory ends
/// with the last accepted state.
FlowTrajectory evolve_grid(const Polynomial1D& v0, const Grid1D& grid, const FlowConfig& cfg);

}  // namespace nprg
