#include "nprg/fixed_points.hpp"

#include <algorithm>
#include <cmath>

#include "nprg/dense_system.hpp"
#include "nprg/errors.hpp"
#include "nprg/lpa_kernel.hpp"
#include "nprg/parallel.hpp"

namespace nprg {

namespace {

Eigen::VectorXd beta_at(const Eigen::VectorXd& ahat) { return beta_dimensionless({0.0, ahat}); }

bool in_domain(const Eigen::VectorXd& ahat) { return ahat.size() > 2 && 1.0 + ahat(2) > 0.0; }

std::vector<int> active_indices(int order, bool even_sector) {
  std::vector<int> idx;
  for (int n = 0; n <= order; ++n)
    if (!even_sector || n % 2 == 0) idx.push_back(n);
  return idx;
}

std::optional<Eigen::VectorXd> newton(Eigen::VectorXd a, const std::vector<int>& idx) {
  const auto m = static_cast<Eigen::Index>(idx.size());
  auto residual = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd b = beta_at(x);
    Eigen::VectorXd r(m);
    for (Eigen::Index k = 0; k < m; ++k) r(k) = b(idx[k]);
    return r;
  };
  if (!in_domain(a)) return std::nullopt;
  Eigen::VectorXd r = residual(a);
  for (int it = 0; it < 60; ++it) {
    const double norm = r.norm();
    if (norm < 1e-12 * std::max(1.0, a.norm())) return a;
    const Eigen::MatrixXd full = beta_dimensionless_jacobian(a);
    Eigen::MatrixXd jac(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) jac(i, j) = full(idx[i], idx[j]);
    const Eigen::VectorXd step = jac.fullPivLu().solve(-r);
    if (!step.allFinite()) return std::nullopt;
    double damp = 1.0;
    bool moved = false;
    for (int k = 0; k < 30; ++k, damp *= 0.5) {
      Eigen::VectorXd trial = a;
      for (Eigen::Index i = 0; i < m; ++i) trial(idx[i]) += damp * step(i);
      if (!in_domain(trial)) continue;
      const Eigen::VectorXd rt = residual(trial);
      if (rt.allFinite() && rt.norm() < (1.0 - 1e-4 * damp) * norm) {
        a = trial;
        r = rt;
        moved = true;
        break;
      }
    }
    if (!moved) return r.norm() < 1e-9 * std::max(1.0, a.norm()) ? std::optional(a) : std::nullopt;
  }
  return r.norm() < 1e-9 * std::max(1.0, a.norm()) ? std::optional(a) : std::nullopt;
}

}  // namespace

Eigen::MatrixXd beta_dimensionless_jacobian(const Eigen::VectorXd& ahat) {
  const Eigen::Index n = ahat.size();
  Eigen::MatrixXd jac(n, n);
  Eigen::VectorXd ap = ahat, am = ahat;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(ahat(j)));
    ap(j) = ahat(j) + h;
    am(j) = ahat(j) - h;
    jac.col(j) = (beta_at(ap) - beta_at(am)) / (2.0 * h);
    ap(j) = am(j) = ahat(j);
  }
  return jac;
}

std::vector<FixedPoint> find_fixed_points(int order, const SearchBox& box) {
  if (order < 2) throw ConfigError("truncation order must be at least 2");
  if (box.seeds_per_axis < 1) throw ConfigError("seeds_per_axis must be positive");
  if (static_cast<int>(box.ranges.size()) > order / 2) throw ConfigError("search box has more axes than couplings");
  for (const auto& r : box.ranges)
    if (!(r.first <= r.second)) throw ConfigError("search box range is inverted");
  if (!box.ranges.empty() && !(box.ranges[0].second > -1.0)) throw ConfigError("search box lies beyond ahat_2 = -1");

  const std::vector<int> idx = active_indices(order, box.even_sector);
  std::vector<Eigen::VectorXd> seeds{Eigen::VectorXd::Zero(order + 1)};
  const int axes = static_cast<int>(box.ranges.size());
  long total = 1;
  for (int k = 0; k < axes; ++k) total *= box.seeds_per_axis;
  for (long s = 0; s < (axes ? total : 0); ++s) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(order + 1);
    long rest = s;
    for (int k = 0; k < axes; ++k) {
      const int i = static_cast<int>(rest % box.seeds_per_axis);
      rest /= box.seeds_per_axis;
      const auto [lo, hi] = box.ranges[k];
      a(2 * k + 2) = lo + (hi - lo) * (i + 0.5) / box.seeds_per_axis;
    }
    seeds.push_back(a);
  }

  std::vector<FixedPoint> out;
  for (const auto& seed : seeds) {
    std::optional<Eigen::VectorXd> root;
    try {
      root = newton(seed, idx);
    } catch (const DomainError&) {
      continue;  // difference stencil crossed ahat_2 = -1
    }
    if (!root) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const FixedPoint& f) { return (f.ahat - *root).norm() < 1e-8; });
    if (dup) continue;
    FixedPoint fp;
    fp.ahat = *root;
    fp.gaussian = root->norm() < 1e-10;
    fp.eigenvalues = Eigen::EigenSolver<Eigen::MatrixXd>(beta_dimensionless_jacobian(*root)).eigenvalues();
    fp.relevant = static_cast<int>((fp.eigenvalues.real().array() > 0.0).count());
    out.push_back(std::move(fp));
  }
  std::sort(out.begin(), out.end(), [](const FixedPoint& a, const FixedPoint& b) { return a.ahat(2) < b.ahat(2); });
  return out;
}

std::string FixedPoint::classification() const {
  return (gaussian ? "gaussian" : "nontrivial") + std::string(", ") + std::to_string(relevant) + " relevant";
}

std::string to_string(Phase p) {
  switch (p) {
    case Phase::symmetric: return "symmetric";
    case Phase::false_broken: return "false_broken";
    case Phase::diverged: return "diverged";
    case Phase::undecided: return "undecided";
  }
  return "unknown";
}

double FlowDiagram::fraction(Phase p) const {
  if (seeds.empty()) return 0.0;
  const auto n = std::count_if(seeds.begin(), seeds.end(), [&](const SeedTrajectory& s) { return s.phase == p; });
  return static_cast<double>(n) / static_cast<double>(seeds.size());
}

SeedTrajectory classify_seed(int order, double a2, double a4, const FlowDiagramConfig& cfg) {
  if (order < 4) throw ConfigError("flow diagrams need truncation order >= 4");
  SeedTrajectory out{a2, a4, Phase::undecided, 0.0, {}};
  Eigen::VectorXd y = Eigen::VectorXd::Zero(order + 1);
  y(2) = a2;
  y(4) = a4;
  if (!(1.0 + a2 > 0.0)) {
    out.phase = Phase::false_broken;
    return out;
  }

  DenseSystem sys([](double t, const Vec& a, Vec& da) -> std::optional<DomainViolation> {
    const double arg = 1.0 + a(2);
    if (!(arg > 1e-10)) return DomainViolation{t, 2, arg};
    da = beta_dimensionless({t, a});
    if (!da.allFinite()) return DomainViolation{t, 2, arg};
    return std::nullopt;
  });
  StepControl ctl;
  ctl.max_steps = 100'000;

  if (cfg.keep_samples) out.samples.push_back({0.0, y});
  double t = 0.0;
  while (t < cfg.t_max) {
    const double t_next = std::min(cfg.t_max, t + cfg.sample_dt);
    const IntegrationResult res = integrate_rosenbrock<Eigen::MatrixXd>(sys, t, t_next, y, ctl, {}, {});
    t = res.s_reached;
    if (res.status != IntegrationResult::Status::completed) {
      if (cfg.keep_samples) out.samples.push_back({t, y});
      if (1.0 + y(2) < kSpinodalProximity || res.status == IntegrationResult::Status::domain_violation)
        out.phase = Phase::false_broken;
      else
        out.phase = Phase::diverged;
      break;
    }
    if (cfg.keep_samples) out.samples.push_back({t, y});
    if (y(2) > cfg.symmetric_threshold) {
      out.phase = Phase::symmetric;
      break;
    }
  }
  out.t_end = t;
  return out;
}

FlowDiagram compute_flow_diagram(const FlowDiagramConfig& cfg) {
  if (cfg.seeds_a2 < 1 || cfg.seeds_a4 < 1) throw ConfigError("flow diagram needs at least one seed per axis");
  if (cfg.jobs < 1) throw ConfigError("jobs must be positive");
  if (cfg.order < 4) throw ConfigError("flow diagrams need truncation order >= 4");
  FlowDiagram d{cfg, std::vector<SeedTrajectory>(static_cast<std::size_t>(cfg.seeds_a2) * cfg.seeds_a4)};
  parallel_for(d.seeds.size(), cfg.jobs, [&](std::size_t k) {
    const int i = static_cast<int>(k % cfg.seeds_a2);
    const int j = static_cast<int>(k / cfg.seeds_a2);
    const double a2 = cfg.a2_range.first + (cfg.a2_range.second - cfg.a2_range.first) * (i + 0.5) / cfg.seeds_a2;
    const double a4 = cfg.a4_range.first + (cfg.a4_range.second - cfg.a4_range.first) * (j + 0.5) / cfg.seeds_a4;
    d.seeds[k] = classify_seed(cfg.order, a2, a4, cfg);
  });
  return d;
}

}  // namespace nprg
