#pragma once

#include <stdexcept>
#include <string>

namespace nprg {

// Bad user input: non-positive couplings, malformed configs, unknown keys.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A function was evaluated outside its domain (log argument <= 0 and the like).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// The flow hit 1 + V''/Lambda^2 <= guard at (lambda, x).
class SpinodalError : public DomainError {
public:
  SpinodalError(double lambda, double x, const std::string& what)
      : DomainError(what), lambda_(lambda), x_(x) {}
  double lambda() const { return lambda_; }
  double x() const { return x_; }

private:
  double lambda_;
  double x_;
};

// Grid or window too small to contain the quantity asked for.
class DomainTooSmallError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Observables could not be extracted (negative curvature, saddle, refused snapshot).
class ExtractionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Two global minima tie; the caller has to pick a branch.
class DegenerateMinimumError : public std::runtime_error {
public:
  DegenerateMinimumError(double left, double right)
      : std::runtime_error("degenerate global minimum"), left_(left), right_(right) {}
  double left() const { return left_; }
  double right() const { return right_; }

private:
  double left_;
  double right_;
};

}  // namespace nprg
