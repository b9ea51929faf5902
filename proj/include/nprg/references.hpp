#pragma once

#include <string>

namespace nprg {

enum class ReferenceMethod { harmonic_exact, perturbation2, instanton, valley_susy };

std::string to_string(ReferenceMethod m);

struct ReferenceEstimate {
  ReferenceMethod method = ReferenceMethod::harmonic_exact;
  double value = 0.0;
  std::string validity_note;  // empty when inside the method's regime
};

/// Closed-form a_0(lambda) of the harmonic flow started at a_0(lambda0) = 0:
/// (m/2pi) [F(lambda0/m) - F(lambda/m)], F(p) = p log((1+p^2)/p^2) + 2 atan p.
/// lambda0 may be +infinity (F -> pi); lambda = 0 uses F(0) = 0.
double harmonic_a0_exact(double m, double lambda, double lambda0);

/// Second-order Rayleigh-Schrodinger energy of lambda0 x^4 + x^2/2.
double perturbative_energy(int n, double lambda0);

/// Second-order SUSY series for V+ of W = g x^2 - x, term by term as published.
double susy_perturbative_energy(int n, double g);

/// Dilute-gas gap 2 sqrt(2 sqrt2 / (pi lambda0)) exp(-1 / (3 sqrt2 lambda0)).
double instanton_gap(double lambda0);

/// x_cl(tau) = sign / (2 sqrt lambda0) tanh((tau - tau0) / sqrt2), sign = +-1.
double instanton_profile(double lambda0, double tau, double tau0, int sign = 1);

/// (1/2pi) exp(-1/(3 g^2)).
double valley_susy_energy(double g);

/// Single-well threshold (1/108)^{1/4} of V+; the valley estimate is only
/// meaningful below it.
double susy_single_well_threshold();

ReferenceEstimate harmonic_reference(double m, double lambda, double lambda0);
ReferenceEstimate perturbation2_reference(int n, double lambda0);
ReferenceEstimate instanton_reference(double lambda0);
ReferenceEstimate valley_susy_reference(double g);

}  // namespace nprg
