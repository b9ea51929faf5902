#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nprg/polynomial.hpp"

namespace nprg {

enum class WellKind { single_well, double_well, asym_double_well };

std::string to_string(WellKind kind);
WellKind well_kind_from_string(const std::string& name);

/// lambda0 x^4 + 1/2 x^2, lambda0 x^4 - 1/2 x^2, or lambda0 x^4 - 1/2 x^2 + h0 x.
/// Throws ConfigError unless lambda0 > 0.
Polynomial1D make_standard_potential(WellKind kind, double lambda0, double h0 = 0.0);

/// W(x) = g x^2 - x.
struct SusyPotentialW {
  double g = 0.0;

  Polynomial1D polynomial() const { return Polynomial1D{0.0, -1.0, g}; }
  double operator()(double x) const { return g * x * x - x; }
};

/// (V+, V-) with V+- = W^2/2 +- W'/2.
std::pair<Polynomial1D, Polynomial1D> susy_partner_potentials(const SusyPotentialW& w);

/// All real roots of p, ascending. Roots of p' split the line into monotone
/// pieces which are then bisected, so tangential roots are not lost.
std::vector<double> real_roots(const Polynomial1D& p, double tol = 1e-12);

/// Global minimizers of a polynomial bounded below. More than one entry means
/// the minimum is degenerate (values tie to relative 1e-12).
std::vector<double> global_minimizers(const Polynomial1D& p);

struct ShiftedPotential {
  double x_min = 0.0;
  Polynomial1D shifted;  // q(y) = p(x_min + y)
};

/// Throws DegenerateMinimumError when two global minima tie, so the caller
/// picks the branch with shift_to().
ShiftedPotential shift_to_minimum(const Polynomial1D& p);
ShiftedPotential shift_to(const Polynomial1D& p, double x0);

struct Interaction {
  enum class Kind { linear, quadratic, quartic };
  Kind kind = Kind::linear;
  double strength = 0.0;  // C, C2 or C4

  static Interaction linear(double c) { return {Kind::linear, c}; }
  static Interaction quadratic(double c2) { return {Kind::quadratic, c2}; }
  static Interaction quartic(double c4) { return {Kind::quartic, c4}; }
};

std::string to_string(Interaction::Kind kind);
Interaction::Kind interaction_kind_from_string(const std::string& name);

/// The interaction term F(phi1, phi2) alone.
BivariatePolynomial interaction_polynomial(const Interaction& f);

/// -1/2 phi1^2 + l phi1^4 - 1/2 phi2^2 + l phi2^4 + F(phi1, phi2).
BivariatePolynomial make_two_particle_potential(double lambda0, const Interaction& f);

/// Substitutes phi1 = (x1 + x2)/sqrt2, phi2 = (x2 - x1)/sqrt2 and re-expands.
/// Throws ConfigError if the total degree exceeds max_degree.
BivariatePolynomial rotate_to_normal_coordinates(const BivariatePolynomial& p, int max_degree = 16);

}  // namespace nprg
