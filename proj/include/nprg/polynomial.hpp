#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nprg {

/// Dense univariate polynomial in the monomial basis, V(x) = sum_n c_n x^n.
template <typename Scalar>
class Polynomial {
public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() : coeffs_(Coeffs::Zero(1)) {}
  explicit Polynomial(Coeffs c) : coeffs_(std::move(c)) {
    if (coeffs_.size() == 0) coeffs_ = Coeffs::Zero(1);
  }
  Polynomial(std::initializer_list<Scalar> c) : coeffs_(static_cast<Eigen::Index>(c.size())) {
    Eigen::Index i = 0;
    for (Scalar v : c) coeffs_(i++) = v;
    if (coeffs_.size() == 0) coeffs_ = Coeffs::Zero(1);
  }

  const Coeffs& coeffs() const { return coeffs_; }
  Scalar coeff(int n) const { return n < coeffs_.size() ? coeffs_(n) : Scalar(0); }

  // Storage size minus one; trailing zeros count.
  int size_degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  // Index of the highest nonzero coefficient (0 for the zero polynomial).
  int degree() const {
    for (Eigen::Index k = coeffs_.size() - 1; k > 0; --k)
      if (coeffs_(k) != Scalar(0)) return static_cast<int>(k);
    return 0;
  }
  Scalar leading() const { return coeffs_(degree()); }

  Scalar operator()(Scalar x) const {
    Scalar acc(0);
    for (Eigen::Index k = coeffs_.size() - 1; k >= 0; --k) acc = acc * x + coeffs_(k);
    return acc;
  }

  Polynomial derivative(int times = 1) const {
    Coeffs c = coeffs_;
    for (int t = 0; t < times; ++t) {
      if (c.size() <= 1) return Polynomial(Coeffs::Zero(1));
      Coeffs d(c.size() - 1);
      for (Eigen::Index k = 1; k < c.size(); ++k) d(k - 1) = Scalar(k) * c(k);
      c = std::move(d);
    }
    return Polynomial(std::move(c));
  }

  // q(y) = p(x0 + y), by repeated synthetic division (Taylor shift).
  Polynomial shifted(Scalar x0) const {
    Coeffs c = coeffs_;
    const Eigen::Index n = c.size();
    for (Eigen::Index i = 0; i < n - 1; ++i)
      for (Eigen::Index k = n - 2; k >= i; --k) c(k) += x0 * c(k + 1);
    return Polynomial(std::move(c));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    const Eigen::Index n = std::max(a.coeffs_.size(), b.coeffs_.size());
    Coeffs c = Coeffs::Zero(n);
    c.head(a.coeffs_.size()) += a.coeffs_;
    c.head(b.coeffs_.size()) += b.coeffs_;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b * Scalar(-1); }
  friend Polynomial operator*(const Polynomial& a, Scalar s) { return Polynomial(Coeffs(a.coeffs_ * s)); }
  friend Polynomial operator*(Scalar s, const Polynomial& a) { return a * s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Coeffs c = Coeffs::Zero(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (Eigen::Index i = 0; i < a.coeffs_.size(); ++i)
      for (Eigen::Index j = 0; j < b.coeffs_.size(); ++j) c(i + j) += a.coeffs_(i) * b.coeffs_(j);
    return Polynomial(std::move(c));
  }

private:
  Coeffs coeffs_;
};

using Polynomial1D = Polynomial<double>;

/// Sparse polynomial in two variables keyed by exponent pair (i, j) for x1^i x2^j.
class BivariatePolynomial {
public:
  using Key = std::pair<int, int>;

  BivariatePolynomial() = default;

  void add(int i, int j, double c) {
    if (i < 0 || j < 0) throw std::invalid_argument("negative exponent");
    coeffs_[{i, j}] += c;
  }
  double coeff(int i, int j) const {
    auto it = coeffs_.find({i, j});
    return it == coeffs_.end() ? 0.0 : it->second;
  }
  const std::map<Key, double>& terms() const { return coeffs_; }

  int total_degree() const {
    int d = 0;
    for (const auto& [k, c] : coeffs_)
      if (c != 0.0) d = std::max(d, k.first + k.second);
    return d;
  }

  double operator()(double x1, double x2) const {
    double acc = 0.0;
    for (const auto& [k, c] : coeffs_) acc += c * std::pow(x1, k.first) * std::pow(x2, k.second);
    return acc;
  }

  friend BivariatePolynomial operator+(BivariatePolynomial a, const BivariatePolynomial& b) {
    for (const auto& [k, c] : b.coeffs_) a.add(k.first, k.second, c);
    return a;
  }
  friend BivariatePolynomial operator*(const BivariatePolynomial& a, double s) {
    BivariatePolynomial out;
    for (const auto& [k, c] : a.coeffs_) out.add(k.first, k.second, c * s);
    return out;
  }
  friend BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b) {
    BivariatePolynomial out;
    for (const auto& [ka, ca] : a.coeffs_)
      for (const auto& [kb, cb] : b.coeffs_) out.add(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return out;
  }

  // Drops exact zeros produced by cancellation.
  void prune() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) it = it->second == 0.0 ? coeffs_.erase(it) : std::next(it);
  }

private:
  std::map<Key, double> coeffs_;
};

}  // namespace nprg
