#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gevrey/error.hpp"
#include "gevrey/linalg.hpp"
#include "gevrey/numeric.hpp"

namespace gevrey {

enum class Var { eps, z, t };

inline const char* to_string(Var v) {
  switch (v) {
    case Var::eps: return "eps";
    case Var::z: return "z";
    case Var::t: return "t";
  }
  return "?";
}

/// Truncated power series c_0 + c_1 x + ... + c_K x^K.
///
/// A truncated series knows its coefficients through order K only; the
/// ones beyond are unknown. An exact series is a polynomial: coefficients
/// beyond K are genuinely zero. Problem data (tensor entries in eps) are
/// exact; everything a solver produces is truncated.
template <class Real>
class Series {
 public:
  using Scalar = Complex<Real>;

  Series() = default;
  Series(Var var, std::vector<Scalar> coeffs, bool exact = false)
      : var_(var), coeffs_(std::move(coeffs)), exact_(exact) {
    if (coeffs_.empty()) {
      if (!exact_) throw Error(ErrorCode::domain, "truncated series needs at least one coefficient");
      coeffs_.push_back(Scalar(0));
    }
  }

  static Series zero(Var var, int order) {
    return Series(var, std::vector<Scalar>(static_cast<std::size_t>(order + 1), Scalar(0)));
  }
  static Series constant(Var var, Scalar c) { return Series(var, {c}, true); }

  Var var() const { return var_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool exact() const { return exact_; }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }

  /// Coefficient of x^k. Past the order this is zero for exact series and a
  /// domain error for truncated ones.
  Scalar coeff(int k) const {
    if (k < 0) return Scalar(0);
    if (k <= order()) return coeffs_[static_cast<std::size_t>(k)];
    if (exact_) return Scalar(0);
    throw Error(ErrorCode::domain, "coefficient " + std::to_string(k) +
                                       " requested past truncation order " +
                                       std::to_string(order()));
  }

  Scalar& operator[](int k) { return coeffs_[static_cast<std::size_t>(k)]; }
  const Scalar& operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }

  Series truncate(int order) const {
    if (order > this->order() && !exact_)
      throw Error(ErrorCode::domain, "cannot extend a truncated series");
    std::vector<Scalar> c(static_cast<std::size_t>(order + 1), Scalar(0));
    const int n = std::min(order, this->order());
    for (int k = 0; k <= n; ++k) c[k] = coeffs_[k];
    return Series(var_, std::move(c), false);
  }

  Series& operator*=(const Scalar& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  friend Series operator*(Series p, const Scalar& s) { return p *= s; }
  friend Series operator*(const Scalar& s, Series p) { return p *= s; }
  Series operator-() const { return *this * Scalar(-1); }

  friend Series operator+(const Series& p, const Series& q) { return combine(p, q, Scalar(1)); }
  friend Series operator-(const Series& p, const Series& q) { return combine(p, q, Scalar(-1)); }

  Real max_abs() const {
    Real m(0);
    for (const auto& c : coeffs_) m = std::max(m, magnitude(c));
    return m;
  }

 private:
  static Series combine(const Series& p, const Series& q, const Scalar& sign) {
    require_same_var(p, q);
    const bool exact = p.exact_ && q.exact_;
    int order;
    if (exact) order = std::max(p.order(), q.order());
    else if (p.exact_) order = q.order();
    else if (q.exact_) order = p.order();
    else order = std::min(p.order(), q.order());
    std::vector<Scalar> c(static_cast<std::size_t>(order + 1), Scalar(0));
    for (int k = 0; k <= order; ++k) {
      if (k <= p.order()) c[k] += p.coeffs_[k];
      if (k <= q.order()) c[k] += sign * q.coeffs_[k];
    }
    return Series(p.var_, std::move(c), exact);
  }

 public:
  static void require_same_var(const Series& p, const Series& q) {
    if (p.var_ != q.var_)
      throw Error(ErrorCode::domain, std::string("series variable mismatch: ") + to_string(p.var_) +
                                         " vs " + to_string(q.var_));
  }

 private:
  Var var_ = Var::z;
  std::vector<Scalar> coeffs_{Scalar(0)};
  bool exact_ = true;
};

/// Order of a product of two series with the given orders and exactness.
inline std::pair<int, bool> product_order(int p, bool p_exact, int q, bool q_exact) {
  if (p_exact && q_exact) return {p + q, true};
  if (p_exact) return {q, false};
  if (q_exact) return {p, false};
  return {std::min(p, q), false};
}

/// Cauchy product; for truncated operands the result stops at the smaller order.
template <class Real>
Series<Real> series_mul(const Series<Real>& p, const Series<Real>& q) {
  Series<Real>::require_same_var(p, q);
  const auto [order, exact] = product_order(p.order(), p.exact(), q.order(), q.exact());
  std::vector<Complex<Real>> c(static_cast<std::size_t>(order + 1), Complex<Real>(0));
  for (int i = 0; i <= p.order() && i <= order; ++i) {
    const auto pi = p[i];
    if (pi == Complex<Real>(0)) continue;
    const int jmax = std::min(q.order(), order - i);
    for (int j = 0; j <= jmax; ++j) c[i + j] += pi * q[j];
  }
  return Series<Real>(p.var(), std::move(c), exact);
}

template <class Real>
Series<Real> operator*(const Series<Real>& p, const Series<Real>& q) {
  return series_mul(p, q);
}

/// d/dx; a truncated series loses one order.
template <class Real>
Series<Real> series_derivative(const Series<Real>& p) {
  if (p.order() == 0) {
    if (p.exact()) return Series<Real>::constant(p.var(), Complex<Real>(0));
    throw Error(ErrorCode::domain, "derivative of an order-0 truncated series is unknown");
  }
  std::vector<Complex<Real>> c(static_cast<std::size_t>(p.order()), Complex<Real>(0));
  for (int k = 0; k + 1 <= p.order(); ++k) c[k] = Real(k + 1) * p[k + 1];
  return Series<Real>(p.var(), std::move(c), p.exact());
}

/// Multiplication by x^s; the order grows by s.
template <class Real>
Series<Real> shift(const Series<Real>& p, int s) {
  std::vector<Complex<Real>> c(static_cast<std::size_t>(p.order() + s + 1), Complex<Real>(0));
  for (int k = 0; k <= p.order(); ++k) c[k + s] = p[k];
  return Series<Real>(p.var(), std::move(c), p.exact());
}

/// Horner evaluation of the partial sum through the order.
template <class Real>
Complex<Real> evaluate(const Series<Real>& p, const Complex<Real>& x) {
  Complex<Real> acc(0);
  for (int k = p.order(); k >= 0; --k) acc = acc * x + p[k];
  return acc;
}

/// nu-vector valued series, stored by coefficient: coeff(k) is a nu-vector.
template <class Real>
class VecSeries {
 public:
  using Scalar = Complex<Real>;

  VecSeries() = default;
  VecSeries(Var var, int nu, int order, bool exact = false)
      : var_(var), nu_(nu), exact_(exact),
        coeffs_(static_cast<std::size_t>(order + 1), CVector<Real>(static_cast<std::size_t>(nu), Scalar(0))) {}
  VecSeries(Var var, std::vector<CVector<Real>> coeffs, bool exact = false)
      : var_(var), nu_(coeffs.empty() ? 0 : static_cast<int>(coeffs.front().size())),
        exact_(exact), coeffs_(std::move(coeffs)) {
    for (const auto& c : coeffs_)
      if (static_cast<int>(c.size()) != nu_)
        throw Error(ErrorCode::domain, "vector series components differ in length");
  }

  static VecSeries from_components(const std::vector<Series<Real>>& comps) {
    if (comps.empty()) throw Error(ErrorCode::domain, "vector series needs a component");
    const Var var = comps.front().var();
    const int order = comps.front().order();
    const bool exact = comps.front().exact();
    for (const auto& c : comps)
      if (c.var() != var || c.order() != order || c.exact() != exact)
        throw Error(ErrorCode::domain, "vector series components must share var and order");
    VecSeries out(var, static_cast<int>(comps.size()), order, exact);
    for (int i = 0; i < out.nu_; ++i)
      for (int k = 0; k <= order; ++k) out.coeffs_[k][i] = comps[i][k];
    return out;
  }

  Var var() const { return var_; }
  int nu() const { return nu_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool exact() const { return exact_; }

  CVector<Real>& operator[](int k) { return coeffs_[static_cast<std::size_t>(k)]; }
  const CVector<Real>& operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }
  const std::vector<CVector<Real>>& coeffs() const { return coeffs_; }

  Series<Real> component(int i) const {
    std::vector<Scalar> c(coeffs_.size());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] = coeffs_[k][i];
    return Series<Real>(var_, std::move(c), exact_);
  }

  CVector<Real> evaluate(const Scalar& x) const {
    CVector<Real> acc(static_cast<std::size_t>(nu_), Scalar(0));
    for (int k = order(); k >= 0; --k)
      for (int i = 0; i < nu_; ++i) acc[i] = acc[i] * x + coeffs_[k][i];
    return acc;
  }

  VecSeries truncate(int order) const {
    if (order > this->order()) throw Error(ErrorCode::domain, "cannot extend a vector series");
    return VecSeries(var_, std::vector<CVector<Real>>(coeffs_.begin(), coeffs_.begin() + order + 1));
  }

 private:
  Var var_ = Var::z;
  int nu_ = 0;
  bool exact_ = false;
  std::vector<CVector<Real>> coeffs_;
};

/// Square matrix valued series, stored by coefficient.
template <class Real>
class MatSeries {
 public:
  MatSeries() = default;
  MatSeries(Var var, int nu, int order, bool exact = false)
      : var_(var), nu_(nu), exact_(exact),
        coeffs_(static_cast<std::size_t>(order + 1), Matrix<Real>(nu, nu)) {}
  MatSeries(Var var, std::vector<Matrix<Real>> coeffs, bool exact = false)
      : var_(var), nu_(coeffs.empty() ? 0 : coeffs.front().rows()), exact_(exact),
        coeffs_(std::move(coeffs)) {
    for (const auto& c : coeffs_)
      if (c.rows() != nu_ || c.cols() != nu_)
        throw Error(ErrorCode::domain, "matrix series needs square coefficients of one size");
  }

  Var var() const { return var_; }
  int nu() const { return nu_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool exact() const { return exact_; }

  Matrix<Real>& operator[](int k) { return coeffs_[static_cast<std::size_t>(k)]; }
  const Matrix<Real>& operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }

  Series<Real> entry(int r, int c) const {
    std::vector<Complex<Real>> v(coeffs_.size());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) v[k] = coeffs_[k](r, c);
    return Series<Real>(var_, std::move(v), exact_);
  }

  Matrix<Real> evaluate(const Complex<Real>& x) const {
    Matrix<Real> acc(nu_, nu_);
    for (int k = order(); k >= 0; --k) acc = acc * x + coeffs_[k];
    return acc;
  }

 private:
  Var var_ = Var::z;
  int nu_ = 0;
  bool exact_ = false;
  std::vector<Matrix<Real>> coeffs_;
};

template <class Real>
MatSeries<Real> operator*(const MatSeries<Real>& a, const MatSeries<Real>& b) {
  if (a.var() != b.var()) throw Error(ErrorCode::domain, "matrix series variable mismatch");
  const auto [order, exact] = product_order(a.order(), a.exact(), b.order(), b.exact());
  MatSeries<Real> out(a.var(), a.nu(), order, exact);
  for (int i = 0; i <= a.order() && i <= order; ++i)
    for (int j = 0; j <= b.order() && i + j <= order; ++j) out[i + j] += a[i] * b[j];
  return out;
}

template <class Real>
VecSeries<Real> operator*(const MatSeries<Real>& a, const VecSeries<Real>& v) {
  if (a.var() != v.var()) throw Error(ErrorCode::domain, "matrix/vector series variable mismatch");
  const auto [order, exact] = product_order(a.order(), a.exact(), v.order(), v.exact());
  VecSeries<Real> out(a.var(), a.nu(), order, exact);
  for (int i = 0; i <= a.order() && i <= order; ++i)
    for (int j = 0; j <= v.order() && i + j <= order; ++j) {
      const auto w = a[i] * v[j];
      for (int r = 0; r < a.nu(); ++r) out[i + j][r] += w[r];
    }
  return out;
}

/// Inverse through the truncation order by the recursion
/// S_0 = T_0^{-1}, S_k = -T_0^{-1} sum_{j=1..k} T_j S_{k-j}.
/// The product T*S is checked against the identity coefficient by coefficient.
template <class Real>
MatSeries<Real> mat_series_inverse(const MatSeries<Real>& t, double tolerance = 1e-12) {
  const int nu = t.nu();
  const int order = t.order();
  const Matrix<Real> s0 = checked_inverse(t[0], 1e-14, "series inverse constant term");
  MatSeries<Real> s(t.var(), nu, order, false);
  s[0] = s0;
  for (int k = 1; k <= order; ++k) {
    Matrix<Real> acc(nu, nu);
    for (int j = 1; j <= k; ++j) acc += t[j] * s[k - j];
    s[k] = s0 * acc * Complex<Real>(-1);
  }
  for (int k = 0; k <= order; ++k) {
    Matrix<Real> r = k == 0 ? Matrix<Real>::identity(nu) * Complex<Real>(-1) : Matrix<Real>(nu, nu);
    double scale = 1.0;
    for (int j = 0; j <= k; ++j) {
      r += t[j] * s[k - j];
      scale = std::max(scale, to_double(t[j].frobenius_norm()) * to_double(s[k - j].frobenius_norm()));
    }
    if (to_double(r.frobenius_norm()) > tolerance * scale)
      throw Error(ErrorCode::numerical,
                  "series inverse residual too large at order " + std::to_string(k));
  }
  return s;
}

}  // namespace gevrey
