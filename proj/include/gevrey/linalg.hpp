#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gevrey/error.hpp"
#include "gevrey/numeric.hpp"

namespace gevrey {

/// Small dense complex matrix, row-major. Sized for nu <= 8 systems and
/// Pade/Toeplitz blocks of a few dozen rows.
template <class Real>
class Matrix {
 public:
  using Scalar = Complex<Real>;

  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), Scalar(0)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Scalar& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const Scalar& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r * cols_ + c)];
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const Scalar& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Scalar& s) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const Scalar aik = a(i, k);
        if (aik == Scalar(0)) continue;
        for (int j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend CVector<Real> operator*(const Matrix& a, const CVector<Real>& v) {
    CVector<Real> out(static_cast<std::size_t>(a.rows_), Scalar(0));
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }

  Real frobenius_norm() const { return euclidean_norm<Real>(std::span<const Scalar>(data_)); }

  const std::vector<Scalar>& data() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Scalar> data_;
};

template <class Real>
Eigen::MatrixXcd to_eigen(const Matrix<Real>& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

/// Singular values (descending), computed in double.
template <class Real>
std::vector<double> singular_values(const Matrix<Real>& m) {
  if (m.rows() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

template <class Real>
double spectral_norm(const Matrix<Real>& m) {
  const auto s = singular_values(m);
  return s.empty() ? 0.0 : s.front();
}

template <class Real>
double smallest_singular_value(const Matrix<Real>& m) {
  const auto s = singular_values(m);
  return s.empty() ? 0.0 : s.back();
}

/// LU factorization with partial pivoting. Dense and generic over the real
/// type so it works in binary128 as well as double.
template <class Real>
class LuDecomposition {
 public:
  using Scalar = Complex<Real>;

  explicit LuDecomposition(Matrix<Real> a) : lu_(std::move(a)), perm_(lu_.rows()) {
    const int n = lu_.rows();
    for (int i = 0; i < n; ++i) perm_[i] = i;
    for (int k = 0; k < n; ++k) {
      int p = k;
      Real best = magnitude(lu_(k, k));
      for (int i = k + 1; i < n; ++i) {
        const Real v = magnitude(lu_(i, k));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (p != k) {
        for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(perm_[k], perm_[p]);
      }
      const Scalar pivot = lu_(k, k);
      if (pivot == Scalar(0)) {
        singular_ = true;
        continue;
      }
      for (int i = k + 1; i < n; ++i) {
        lu_(i, k) /= pivot;
        const Scalar f = lu_(i, k);
        if (f == Scalar(0)) continue;
        for (int j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  bool singular() const { return singular_; }

  /// min |U_kk| / max |U_kk|; a cheap rank-revealing proxy.
  Real pivot_ratio() const {
    const int n = lu_.rows();
    if (n == 0) return Real(1);
    Real lo = magnitude(lu_(0, 0));
    Real hi = lo;
    for (int k = 1; k < n; ++k) {
      const Real v = magnitude(lu_(k, k));
      lo = v < lo ? v : lo;
      hi = v > hi ? v : hi;
    }
    return hi == Real(0) ? Real(0) : lo / hi;
  }

  CVector<Real> solve(const CVector<Real>& b) const {
    if (singular_) throw Error(ErrorCode::singular, "LU solve on a singular matrix");
    const int n = lu_.rows();
    CVector<Real> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
      x[i] /= lu_(i, i);
    }
    return x;
  }

  Matrix<Real> inverse() const {
    const int n = lu_.rows();
    Matrix<Real> inv(n, n);
    for (int c = 0; c < n; ++c) {
      CVector<Real> e(static_cast<std::size_t>(n), Scalar(0));
      e[c] = Scalar(1);
      const auto col = solve(e);
      for (int r = 0; r < n; ++r) inv(r, c) = col[r];
    }
    return inv;
  }

 private:
  Matrix<Real> lu_;
  std::vector<int> perm_;
  bool singular_ = false;
};

/// Inverse of a matrix whose smallest singular value must exceed
/// `rel_threshold * ||a||`; otherwise a SingularError carries both numbers.
template <class Real>
Matrix<Real> checked_inverse(const Matrix<Real>& a, double rel_threshold, const std::string& what) {
  const auto sv = singular_values(a);
  const double norm = sv.empty() ? 0.0 : sv.front();
  const double smin = sv.empty() ? 0.0 : sv.back();
  if (!(norm > 0.0) || smin <= rel_threshold * norm) {
    throw SingularError(what + ": matrix is singular (norm " + std::to_string(norm) +
                            ", smallest singular value " + std::to_string(smin) + ")",
                        norm, smin);
  }
  LuDecomposition<Real> lu(a);
  return lu.inverse();
}

}  // namespace gevrey
