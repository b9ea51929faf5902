#pragma once

// Truncated power series in one and two variables.
//
// Arithmetic discards every term whose (total) degree exceeds the truncation
// order, so products and logarithms of series are exact up to that order.
// This is the engine that turns the LPA flow equation into coupling ODEs for
// any truncation order.

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "nprg/errors.hpp"

namespace nprg {

template <typename Scalar>
class TruncatedSeries {
public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  TruncatedSeries() = default;

  explicit TruncatedSeries(int order) : coeffs_(Coeffs::Zero(order + 1)) {
    if (order < 0) throw std::invalid_argument("series order must be non-negative");
  }

  // Takes the first order+1 entries of c (zero-padded if shorter).
  TruncatedSeries(int order, const Coeffs& c) : TruncatedSeries(order) {
    const Eigen::Index n = std::min<Eigen::Index>(c.size(), order + 1);
    coeffs_.head(n) = c.head(n);
  }

  static TruncatedSeries constant(int order, Scalar value) {
    TruncatedSeries s(order);
    s.coeffs_(0) = value;
    return s;
  }

  // The series for the variable itself: 0 + 1*phi.
  static TruncatedSeries variable(int order) {
    TruncatedSeries s(order);
    if (order >= 1) s.coeffs_(1) = Scalar(1);
    return s;
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Coeffs& coeffs() const { return coeffs_; }
  Coeffs& coeffs() { return coeffs_; }
  Scalar operator[](int k) const { return coeffs_(k); }
  Scalar& operator[](int k) { return coeffs_(k); }

  Scalar evaluate(Scalar phi) const {
    Scalar acc(0);
    for (Eigen::Index k = coeffs_.size() - 1; k >= 0; --k) acc = acc * phi + coeffs_(k);
    return acc;
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    check_order(o);
    coeffs_ += o.coeffs_;
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    check_order(o);
    coeffs_ -= o.coeffs_;
    return *this;
  }
  TruncatedSeries& operator*=(Scalar s) {
    coeffs_ *= s;
    return *this;
  }
  TruncatedSeries& operator*=(const TruncatedSeries& o) {
    *this = *this * o;
    return *this;
  }

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, Scalar s) { return a *= s; }
  friend TruncatedSeries operator*(Scalar s, TruncatedSeries a) { return a *= s; }
  friend TruncatedSeries operator-(TruncatedSeries a) {
    a.coeffs_ = -a.coeffs_;
    return a;
  }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check_order(b);
    const int n = a.order();
    TruncatedSeries out(n);
    for (int i = 0; i <= n; ++i) {
      const Scalar ai = a.coeffs_(i);
      if (ai == Scalar(0)) continue;
      for (int j = 0; i + j <= n; ++j) out.coeffs_(i + j) += ai * b.coeffs_(j);
    }
    return out;
  }

  // d/dphi, keeping the same order (top coefficient becomes zero).
  TruncatedSeries derivative() const {
    TruncatedSeries out(order());
    for (int k = 1; k <= order(); ++k) out.coeffs_(k - 1) = Scalar(k) * coeffs_(k);
    return out;
  }

private:
  void check_order(const TruncatedSeries& o) const {
    if (o.coeffs_.size() != coeffs_.size()) throw std::invalid_argument("series order mismatch");
  }

  Coeffs coeffs_;
};

// log(1 + u) to the order of u. Split off the constant term,
// log(1+u) = log(1+u0) + log(1+w) with w = (u-u0)/(1+u0), then sum the
// alternating series; w has no constant term so w^k vanishes past k = N.
template <typename Scalar>
TruncatedSeries<Scalar> series_log1p(const TruncatedSeries<Scalar>& u) {
  using std::log1p;
  const int n = u.order();
  const Scalar u0 = u[0];
  if (!(Scalar(1) + u0 > Scalar(0))) throw DomainError("series_log1p: constant term must exceed -1");

  TruncatedSeries<Scalar> w = u;
  w[0] = Scalar(0);
  w *= Scalar(1) / (Scalar(1) + u0);

  TruncatedSeries<Scalar> out = TruncatedSeries<Scalar>::constant(n, log1p(u0));
  TruncatedSeries<Scalar> power = w;
  for (int k = 1; k <= n; ++k) {
    const Scalar sign = (k % 2 == 1) ? Scalar(1) : Scalar(-1);
    out += power * (sign / Scalar(k));
    if (k < n) power = power * w;
  }
  return out;
}

// Two-variable series with total degree <= N. Coefficient (i, j) multiplies
// x1^i x2^j; entries with i + j > N are kept at zero.
template <typename Scalar>
class TruncatedSeries2 {
public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  TruncatedSeries2() = default;

  explicit TruncatedSeries2(int order) : coeffs_(Coeffs::Zero(order + 1, order + 1)) {
    if (order < 0) throw std::invalid_argument("series order must be non-negative");
  }

  static TruncatedSeries2 constant(int order, Scalar value) {
    TruncatedSeries2 s(order);
    s.coeffs_(0, 0) = value;
    return s;
  }

  int order() const { return static_cast<int>(coeffs_.rows()) - 1; }
  const Coeffs& coeffs() const { return coeffs_; }

  Scalar operator()(int i, int j) const { return coeffs_(i, j); }

  // Writes outside the total-degree triangle are rejected.
  void set(int i, int j, Scalar value) {
    if (i < 0 || j < 0 || i + j > order()) throw std::out_of_range("TruncatedSeries2: total degree exceeds order");
    coeffs_(i, j) = value;
  }
  void add(int i, int j, Scalar value) { set(i, j, coeffs_(i, j) + value); }

  Scalar evaluate(Scalar x1, Scalar x2) const {
    Scalar acc(0);
    const int n = order();
    Scalar p1(1);
    for (int i = 0; i <= n; ++i) {
      Scalar p2(1);
      for (int j = 0; i + j <= n; ++j) {
        acc += coeffs_(i, j) * p1 * p2;
        p2 *= x2;
      }
      p1 *= x1;
    }
    return acc;
  }

  TruncatedSeries2& operator+=(const TruncatedSeries2& o) {
    check_order(o);
    coeffs_ += o.coeffs_;
    return *this;
  }
  TruncatedSeries2& operator-=(const TruncatedSeries2& o) {
    check_order(o);
    coeffs_ -= o.coeffs_;
    return *this;
  }
  TruncatedSeries2& operator*=(Scalar s) {
    coeffs_ *= s;
    return *this;
  }

  friend TruncatedSeries2 operator+(TruncatedSeries2 a, const TruncatedSeries2& b) { return a += b; }
  friend TruncatedSeries2 operator-(TruncatedSeries2 a, const TruncatedSeries2& b) { return a -= b; }
  friend TruncatedSeries2 operator*(TruncatedSeries2 a, Scalar s) { return a *= s; }
  friend TruncatedSeries2 operator*(Scalar s, TruncatedSeries2 a) { return a *= s; }

  friend TruncatedSeries2 operator*(const TruncatedSeries2& a, const TruncatedSeries2& b) {
    a.check_order(b);
    const int n = a.order();
    TruncatedSeries2 out(n);
    for (int i1 = 0; i1 <= n; ++i1) {
      for (int j1 = 0; i1 + j1 <= n; ++j1) {
        const Scalar c = a.coeffs_(i1, j1);
        if (c == Scalar(0)) continue;
        const int rest = n - i1 - j1;
        for (int i2 = 0; i2 <= rest; ++i2)
          for (int j2 = 0; i2 + j2 <= rest; ++j2) out.coeffs_(i1 + i2, j1 + j2) += c * b.coeffs_(i2, j2);
      }
    }
    return out;
  }

  // Partial derivative with respect to x1 (var = 0) or x2 (var = 1).
  TruncatedSeries2 derivative(int var) const {
    TruncatedSeries2 out(order());
    const int n = order();
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n; ++j) {
        if (var == 0 && i > 0) out.coeffs_(i - 1, j) = Scalar(i) * coeffs_(i, j);
        if (var == 1 && j > 0) out.coeffs_(i, j - 1) = Scalar(j) * coeffs_(i, j);
      }
    return out;
  }

private:
  void check_order(const TruncatedSeries2& o) const {
    if (o.coeffs_.rows() != coeffs_.rows()) throw std::invalid_argument("series order mismatch");
  }

  Coeffs coeffs_;
};

template <typename Scalar>
TruncatedSeries2<Scalar> series_log1p(const TruncatedSeries2<Scalar>& u) {
  using std::log1p;
  const int n = u.order();
  const Scalar u0 = u(0, 0);
  if (!(Scalar(1) + u0 > Scalar(0))) throw DomainError("series_log1p: constant term must exceed -1");

  TruncatedSeries2<Scalar> w = u;
  w.set(0, 0, Scalar(0));
  w *= Scalar(1) / (Scalar(1) + u0);

  TruncatedSeries2<Scalar> out = TruncatedSeries2<Scalar>::constant(n, log1p(u0));
  TruncatedSeries2<Scalar> power = w;
  for (int k = 1; k <= n; ++k) {
    const Scalar sign = (k % 2 == 1) ? Scalar(1) : Scalar(-1);
    out += power * (sign / Scalar(k));
    if (k < n) power = power * w;
  }
  return out;
}

using Series = TruncatedSeries<double>;
using Series2 = TruncatedSeries2<double>;

}  // namespace nprg
