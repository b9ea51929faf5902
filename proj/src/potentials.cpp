#include "nprg/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nprg/errors.hpp"

namespace nprg {

std::string to_string(WellKind kind) {
  switch (kind) {
    case WellKind::single_well: return "single_well";
    case WellKind::double_well: return "double_well";
    case WellKind::asym_double_well: return "asym_double_well";
  }
  return "unknown";
}

WellKind well_kind_from_string(const std::string& name) {
  if (name == "single_well") return WellKind::single_well;
  if (name == "double_well") return WellKind::double_well;
  if (name == "asym_double_well") return WellKind::asym_double_well;
  throw ConfigError("unknown potential kind: " + name);
}

Polynomial1D make_standard_potential(WellKind kind, double lambda0, double h0) {
  if (!(lambda0 > 0.0)) throw ConfigError("lambda0 must be positive (potential unbounded below)");
  switch (kind) {
    case WellKind::single_well: return Polynomial1D{0.0, 0.0, 0.5, 0.0, lambda0};
    case WellKind::double_well: return Polynomial1D{0.0, 0.0, -0.5, 0.0, lambda0};
    case WellKind::asym_double_well: return Polynomial1D{0.0, h0, -0.5, 0.0, lambda0};
  }
  throw ConfigError("unknown potential kind");
}

std::pair<Polynomial1D, Polynomial1D> susy_partner_potentials(const SusyPotentialW& w) {
  const Polynomial1D wp = w.polynomial();
  const Polynomial1D half_w2 = 0.5 * (wp * wp);
  const Polynomial1D half_dw = 0.5 * wp.derivative();
  return {half_w2 + half_dw, half_w2 - half_dw};
}

namespace {

double bisect(const Polynomial1D& p, double lo, double hi, double tol) {
  double flo = p(lo);
  for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Fujiwara-type bound: every root satisfies |z| <= 2 max_k |c_k / c_N|^(1/(N-k)).
double root_bound(const Polynomial1D& p) {
  const int n = p.degree();
  const double lead = std::abs(p.leading());
  double bound = 0.0;
  for (int k = 0; k < n; ++k) {
    const double ck = std::abs(p.coeff(k));
    if (ck == 0.0) continue;
    bound = std::max(bound, std::pow(ck / lead, 1.0 / (n - k)));
  }
  return 2.0 * bound + 1.0;
}

}  // namespace

std::vector<double> real_roots(const Polynomial1D& p, double tol) {
  const int n = p.degree();
  if (n == 0) return {};
  if (n == 1) return {-p.coeff(0) / p.coeff(1)};

  const double bound = root_bound(p);
  std::vector<double> breaks{-bound};
  for (double c : real_roots(p.derivative(), tol))
    if (c > -bound && c < bound) breaks.push_back(c);
  breaks.push_back(bound);

  // Scale for deciding that an extremum touches zero.
  double scale = 0.0;
  for (int k = 0; k <= n; ++k) scale = std::max(scale, std::abs(p.coeff(k)));
  const double touch = 64.0 * std::numeric_limits<double>::epsilon() * scale;

  std::vector<double> roots;
  for (std::size_t i = 1; i + 1 < breaks.size(); ++i)
    if (std::abs(p(breaks[i])) <= touch) roots.push_back(breaks[i]);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double fa = p(breaks[i]);
    const double fb = p(breaks[i + 1]);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) roots.push_back(bisect(p, breaks[i], breaks[i + 1], tol));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) { return std::abs(x - y) <= 1e-10 * std::max(1.0, std::abs(x)); }),
              roots.end());
  return roots;
}

std::vector<double> global_minimizers(const Polynomial1D& p) {
  const int n = p.degree();
  if (n < 2 || n % 2 != 0 || !(p.leading() > 0.0))
    throw ConfigError("polynomial is not bounded below (need even degree and positive leading coefficient)");

  const std::vector<double> crit = real_roots(p.derivative());
  double best = std::numeric_limits<double>::infinity();
  for (double x : crit) best = std::min(best, p(x));

  const double tie = 1e-12 * std::max(1.0, std::abs(best));
  std::vector<double> out;
  for (double x : crit)
    if (p(x) - best <= tie) out.push_back(x);
  return out;
}

ShiftedPotential shift_to(const Polynomial1D& p, double x0) { return {x0, p.shifted(x0)}; }

ShiftedPotential shift_to_minimum(const Polynomial1D& p) {
  const std::vector<double> mins = global_minimizers(p);
  if (mins.size() > 1) throw DegenerateMinimumError(mins.front(), mins.back());
  return shift_to(p, mins.front());
}

std::string to_string(Interaction::Kind kind) {
  switch (kind) {
    case Interaction::Kind::linear: return "linear";
    case Interaction::Kind::quadratic: return "quadratic";
    case Interaction::Kind::quartic: return "quartic";
  }
  return "unknown";
}

Interaction::Kind interaction_kind_from_string(const std::string& name) {
  if (name == "linear") return Interaction::Kind::linear;
  if (name == "quadratic") return Interaction::Kind::quadratic;
  if (name == "quartic") return Interaction::Kind::quartic;
  throw ConfigError("unknown interaction kind: " + name);
}

BivariatePolynomial interaction_polynomial(const Interaction& f) {
  BivariatePolynomial diff;  // phi1 - phi2
  diff.add(1, 0, 1.0);
  diff.add(0, 1, -1.0);

  BivariatePolynomial out;
  switch (f.kind) {
    case Interaction::Kind::linear:
      out.add(1, 1, f.strength);
      break;
    case Interaction::Kind::quadratic:
      out = (diff * diff) * f.strength;
      break;
    case Interaction::Kind::quartic: {
      const BivariatePolynomial sq = diff * diff;
      out = (sq * sq) * f.strength;
      break;
    }
  }
  out.prune();
  return out;
}

BivariatePolynomial make_two_particle_potential(double lambda0, const Interaction& f) {
  if (!(lambda0 > 0.0)) throw ConfigError("lambda0 must be positive (potential unbounded below)");
  BivariatePolynomial v;
  v.add(2, 0, -0.5);
  v.add(4, 0, lambda0);
  v.add(0, 2, -0.5);
  v.add(0, 4, lambda0);
  v = v + interaction_polynomial(f);
  v.prune();
  return v;
}

BivariatePolynomial rotate_to_normal_coordinates(const BivariatePolynomial& p, int max_degree) {
  if (p.total_degree() > max_degree) throw ConfigError("total degree exceeds the series truncation bound");

  const double r = 1.0 / std::sqrt(2.0);
  BivariatePolynomial phi1;  // (x1 + x2)/sqrt2
  phi1.add(1, 0, r);
  phi1.add(0, 1, r);
  BivariatePolynomial phi2;  // (x2 - x1)/sqrt2
  phi2.add(1, 0, -r);
  phi2.add(0, 1, r);

  auto power = [](const BivariatePolynomial& base, int k) {
    BivariatePolynomial acc;
    acc.add(0, 0, 1.0);
    for (int i = 0; i < k; ++i) acc = acc * base;
    return acc;
  };

  BivariatePolynomial out;
  for (const auto& [key, c] : p.terms()) {
    if (c == 0.0) continue;
    out = out + (power(phi1, key.first) * power(phi2, key.second)) * c;
  }
  // Cancellations leave round-off residue around exact zeros.
  BivariatePolynomial cleaned;
  double scale = 0.0;
  for (const auto& [key, c] : out.terms()) scale = std::max(scale, std::abs(c));
  for (const auto& [key, c] : out.terms())
    if (std::abs(c) > 1e-14 * scale) cleaned.add(key.first, key.second, c);
  return cleaned;
}

}  // namespace nprg
