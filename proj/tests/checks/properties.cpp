#include "checks/properties.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "nprg/coupling_flow.hpp"
#include "nprg/grid_flow.hpp"
#include "nprg/observables.hpp"
#include "nprg/potentials.hpp"
#include "nprg/two_field.hpp"

namespace nprg::checks {

namespace {

template <typename Fn>
CheckResult timed(const std::string& name, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r{name, false, "", 0.0};
  try {
    std::ostringstream os;
    os.precision(3);
    r.ok = fn(os);
    r.detail = os.str();
  } catch (const std::exception& e) {
    r.ok = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

CheckResult z2_preservation() {
  return timed("z2_preservation", [](std::ostream& os) {
    const Grid1D grid(-8.0, 8.0, 1601);
    double worst = 0.0;
    bool completed = true;
    for (const Polynomial1D& v0 : {make_standard_potential(WellKind::single_well, 1.0),
                                   make_standard_potential(WellKind::double_well, 0.3)}) {
      const FlowTrajectory t = evolve_grid(v0, grid, FlowConfig{});
      completed = completed && t.termination.completed();
      for (const GridPotential& s : t.snapshots) {
        const int n = s.grid.points();
        for (int i = 0; i < n / 2; ++i) worst = std::max(worst, std::abs(s.values(i) - s.values(n - 1 - i)));
      }
    }
    os << "max |V(x)-V(-x)| = " << worst;
    return completed && worst < 1e-10;
  });
}

CheckResult shift_covariance() {
  return timed("shift_covariance", [](std::ostream& os) {
    const double c = 0.37, e = 0.25;
    double worst = 0.0;
    auto compare = [&](const ObservableSet& a, const ObservableSet& b) {
      worst = std::max({worst, std::abs(b.x_vev - a.x_vev - c), std::abs(b.e0 - a.e0 - e), std::abs(b.m_eff - a.m_eff),
                        std::abs(b.lambda_eff - a.lambda_eff), std::abs(b.m2 - a.m2), std::abs(b.m4 - a.m4)});
    };
    // Flowed grid potential, moved by c and lifted by e.
    const FlowTrajectory t =
        evolve_grid(make_standard_potential(WellKind::single_well, 0.5), Grid1D(-8.0, 8.0, 1601), FlowConfig{});
    if (!t.termination.completed()) {
      os << "flow did not complete";
      return false;
    }
    const GridPotential& g = t.last();
    GridPotential moved{Grid1D(g.grid.x_min() + c, g.grid.x_max() + c, g.grid.points()), g.values, g.lambda};
    moved.values.array() += e;
    compare(extract_observables(EffectivePotential::from_grid(g)),
            extract_observables(EffectivePotential::from_grid(moved)));

    // Flowed coupling potential, expansion point moved by c.
    const CouplingTrajectory ct = evolve_couplings(
        couplings_from_polynomial(make_standard_potential(WellKind::single_well, 0.5), 12, 100.0), FlowConfig{});
    CouplingVector cv = ct.last();
    const ObservableSet oc = extract_observables(EffectivePotential::from_couplings(cv));
    cv.expansion_point += c;
    cv.a(0) += e;
    compare(oc, extract_observables(EffectivePotential::from_couplings(cv)));

    // Asymmetric closed-form potential.
    const Polynomial1D p{0.2, 0.1, 0.6, 0.05, 0.3};
    compare(extract_observables(EffectivePotential::from_polynomial(p)),
            extract_observables(EffectivePotential::from_polynomial(p.shifted(-c) + Polynomial1D{e})));
    os << "max deviation " << worst;
    return worst < 1e-10;
  });
}

CheckResult uv_insensitivity() {
  return timed("uv_insensitivity", [](std::ostream& os) {
    const Polynomial1D v0{0.0, 0.0, 0.5};
    const Grid1D grid(-8.0, 8.0, 801);
    FlowConfig lo, hi;
    lo.lambda0 = 50.0;
    hi.lambda0 = 100.0;
    const FlowTrajectory a = evolve_grid(v0, grid, lo);
    const FlowTrajectory b = evolve_grid(v0, grid, hi);
    const int mid = grid.points() / 2;
    const double d = std::abs(a.last().values(mid) - b.last().values(mid));
    os << "|a0(50) - a0(100)| = " << d;
    return a.termination.completed() && b.termination.completed() && d < 1e-3;
  });
}

CheckResult ir_convergence() {
  return timed("ir_convergence", [](std::ostream& os) {
    const Polynomial1D v0{0.0, 0.0, 0.5};
    const Grid1D grid(-8.0, 8.0, 801);
    FlowConfig coarse, fine;
    coarse.lambda_ir = 1e-2;
    fine.lambda_ir = 1e-3;
    const ObservableSet a = extract_from_trajectory(evolve_grid(v0, grid, coarse));
    const ObservableSet b = extract_from_trajectory(evolve_grid(v0, grid, fine));
    const double worst = std::max({std::abs(a.x_vev - b.x_vev), std::abs(a.e0 - b.e0), std::abs(a.m_eff - b.m_eff),
                                   std::abs(a.lambda_eff - b.lambda_eff), std::abs(a.m2 - b.m2),
                                   std::abs(a.m4 - b.m4)});
    os << "max observable change " << worst;
    return worst < 1e-4;
  });
}

CheckResult dimensionless_autonomy() {
  return timed("dimensionless_autonomy", [](std::ostream& os) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> a2(-0.9, 2.0);
    std::uniform_real_distribution<double> lam(0.05, 50.0);
    bool identical = true;
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
      const int order = 4 + 2 * (trial % 5);
      DimlessCouplingVector d{0.0, Eigen::VectorXd(order + 1)};
      for (int n = 0; n <= order; ++n) d.ahat(n) = u(rng);
      d.ahat(2) = a2(rng);
      const Eigen::VectorXd b0 = beta_dimensionless(d);
      d.t = 10.0 * std::abs(u(rng)) + 1.0;
      identical = identical && (beta_dimensionless(d).array() == b0.array()).all();

      // The same rate from the dimensionful beta at any Lambda.
      const double l = lam(rng);
      CouplingVector c = to_dimensionful({std::log(100.0 / l), d.ahat}, 100.0);
      const Eigen::VectorXd b = beta_couplings(c);
      for (int n = 0; n <= order; ++n) {
        const double from_dimful = -b(n) * std::pow(l, -0.5 * (n + 2)) + 0.5 * (n + 2) * d.ahat(n);
        worst = std::max(worst, std::abs(from_dimful - b0(n)) / std::max(1.0, std::abs(b0(n))));
      }
    }
    os << (identical ? "bit-identical in t" : "t dependence found") << ", dimensionful mismatch " << worst;
    return identical && worst < 1e-10;
  });
}

CheckResult two_field_separability() {
  return timed("two_field_separability", [](std::ostream& os) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    std::uniform_real_distribution<double> lam(0.8, 5.0);
    const int order = 8;
    double worst_beta = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::VectorXd f(order + 1), g(order + 1);
      for (int k = 0; k <= order; ++k) {
        f(k) = u(rng) / factorial(k);
        g(k) = u(rng) / factorial(k);
      }
      f(2) = 0.5;
      g(2) = 0.4;
      const double l = lam(rng);
      Series2 v(order);
      for (int k = 1; k <= order; ++k) {
        v.set(k, 0, f(k));
        v.set(0, k, g(k));
      }
      v.set(0, 0, f(0) + g(0));
      const Series2 b = beta_couplings_two_field(v, l);
      const Eigen::VectorXd bf = beta_couplings(couplings_from_polynomial(Polynomial1D(f), order, l));
      const Eigen::VectorXd bg = beta_couplings(couplings_from_polynomial(Polynomial1D(g), order, l));
      worst_beta = std::max(worst_beta, rel(b(0, 0), bf(0) + bg(0)));
      for (int k = 1; k <= order; ++k) {
        worst_beta = std::max(worst_beta, rel(b(k, 0), bf(k) / factorial(k)));
        worst_beta = std::max(worst_beta, rel(b(0, k), bg(k) / factorial(k)));
      }
      for (int i = 1; i <= order; ++i)
        for (int j = 1; i + j <= order; ++j) worst_beta = std::max(worst_beta, std::abs(b(i, j)));
    }

    // Integrated flow of two single wells against the two one-field flows.
    const Polynomial1D p1 = make_standard_potential(WellKind::single_well, 0.5);
    const Polynomial1D p2 = make_standard_potential(WellKind::single_well, 1.0);
    Series2 v(order);
    for (int k = 0; k <= 4; ++k) {
      v.add(k, 0, p1.coeff(k));
      if (k > 0) v.add(0, k, p2.coeff(k));
    }
    v.add(0, 0, p2.coeff(0));
    FlowConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    const TwoFieldTrajectory t = evolve_two_field(v, cfg);
    const CouplingTrajectory t1 = evolve_couplings(couplings_from_polynomial(p1, order, cfg.lambda0), cfg);
    const CouplingTrajectory t2 = evolve_couplings(couplings_from_polynomial(p2, order, cfg.lambda0), cfg);
    if (!t.termination.completed() || !t1.termination.completed() || !t2.termination.completed()) {
      os << "flow did not complete";
      return false;
    }
    const Series2& w = t.last().v;
    const double worst_flow = std::max({rel(w(0, 0), t1.last().a(0) + t2.last().a(0)),
                                        rel(2.0 * w(2, 0), t1.last().a(2)), rel(2.0 * w(0, 2), t2.last().a(2)),
                                        rel(24.0 * w(4, 0), t1.last().a(4)), rel(24.0 * w(0, 4), t2.last().a(4)),
                                        std::abs(w(2, 2))});
    os << "beta mismatch " << worst_beta << ", flowed mismatch " << worst_flow;
    return worst_beta < 1e-12 && worst_flow < 1e-6;
  });
}

std::vector<CheckResult> run_all() {
  return {z2_preservation(),        shift_covariance(),      uv_insensitivity(),
          ir_convergence(),         dimensionless_autonomy(), two_field_separability()};
}

}  // namespace nprg::checks
