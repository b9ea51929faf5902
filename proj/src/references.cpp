#include "nprg/references.hpp"

#include <cmath>
#include <numbers>

#include "nprg/errors.hpp"

namespace nprg {

namespace {

double harmonic_antiderivative(double p) {
  if (std::isinf(p)) return std::numbers::pi;
  if (p == 0.0) return 0.0;
  return p * std::log1p(1.0 / (p * p)) + 2.0 * std::atan(p);
}

}  // namespace

std::string to_string(ReferenceMethod m) {
  switch (m) {
    case ReferenceMethod::harmonic_exact: return "harmonic_exact";
    case ReferenceMethod::perturbation2: return "perturbation2";
    case ReferenceMethod::instanton: return "instanton";
    case ReferenceMethod::valley_susy: return "valley_susy";
  }
  return "unknown";
}

double harmonic_a0_exact(double m, double lambda, double lambda0) {
  if (!(m > 0.0)) throw ConfigError("harmonic_a0_exact: mass must be positive");
  if (!(lambda >= 0.0 && lambda <= lambda0)) throw ConfigError("harmonic_a0_exact: need 0 <= lambda <= lambda0");
  const double inv = 1.0 / m;
  return m / (2.0 * std::numbers::pi) * (harmonic_antiderivative(lambda0 * inv) - harmonic_antiderivative(lambda * inv));
}

double perturbative_energy(int n, double lambda0) {
  const double k = n;
  return (k + 0.5) + 0.75 * lambda0 * (2 * k * k + 2 * k + 1) -
         0.125 * lambda0 * lambda0 * (34 * k * k * k + 51 * k * k + 59 * k + 21);
}

double susy_perturbative_energy(int n, double g) {
  const double k = n;
  const double g2 = g * g;
  return k + 0.375 * g2 * (2 * k * k + 2 * k + 1) - 0.375 * g2 * (10 * k * k + 2 * k + 1) -
         g2 * g2 / 32.0 * (34 * k * k * k + 51 * k * k + 59 * k + 21);
}

double instanton_gap(double lambda0) {
  if (!(lambda0 > 0.0)) throw ConfigError("instanton_gap: lambda0 must be positive");
  return 2.0 * std::sqrt(2.0 * std::numbers::sqrt2 / (std::numbers::pi * lambda0)) *
         std::exp(-1.0 / (3.0 * std::numbers::sqrt2 * lambda0));
}

double instanton_profile(double lambda0, double tau, double tau0, int sign) {
  if (!(lambda0 > 0.0)) throw ConfigError("instanton_profile: lambda0 must be positive");
  return (sign < 0 ? -1.0 : 1.0) / (2.0 * std::sqrt(lambda0)) * std::tanh((tau - tau0) / std::numbers::sqrt2);
}

double valley_susy_energy(double g) {
  if (!(g > 0.0)) throw ConfigError("valley_susy_energy: g must be positive");
  return std::exp(-1.0 / (3.0 * g * g)) / (2.0 * std::numbers::pi);
}

double susy_single_well_threshold() { return std::pow(1.0 / 108.0, 0.25); }

ReferenceEstimate harmonic_reference(double m, double lambda, double lambda0) {
  return {ReferenceMethod::harmonic_exact, harmonic_a0_exact(m, lambda, lambda0), ""};
}

ReferenceEstimate perturbation2_reference(int n, double lambda0) {
  ReferenceEstimate r{ReferenceMethod::perturbation2, perturbative_energy(n, lambda0), ""};
  if (lambda0 > 0.1) r.validity_note = "asymptotic series at strong coupling";
  return r;
}

ReferenceEstimate instanton_reference(double lambda0) {
  ReferenceEstimate r{ReferenceMethod::instanton, instanton_gap(lambda0), ""};
  if (lambda0 > 0.1) r.validity_note = "dilute-gas approximation outside the deep-well regime";
  return r;
}

ReferenceEstimate valley_susy_reference(double g) {
  ReferenceEstimate r{ReferenceMethod::valley_susy, valley_susy_energy(g), ""};
  if (g > susy_single_well_threshold()) r.validity_note = "beyond the valley regime: V+ is a single well";
  return r;
}

}  // namespace nprg
