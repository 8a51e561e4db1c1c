#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <type_traits>
#include <vector>

#if defined(GEVREY_WITH_FLOAT128)
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>
#endif

namespace gevrey {

template <class Real>
using Complex = std::complex<Real>;

template <class Real>
using CVector = std::vector<Complex<Real>>;

#if defined(GEVREY_WITH_FLOAT128)
/// IEEE binary128, used where double cannot resolve the quantities involved
/// (high-order Fourier extraction, remainders far below 1e-16).
using quad = boost::multiprecision::float128;
#endif

template <class Real>
Real machine_epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

template <class Real>
Real pi() {
  if constexpr (std::is_floating_point_v<Real>) {
    return std::numbers::pi_v<Real>;
  } else {
    return boost::math::constants::pi<Real>();
  }
}

/// |z| without overflow of re^2 + im^2.
template <class Real>
Real magnitude(const Complex<Real>& z) {
  using std::abs;
  using std::sqrt;
  const Real a = abs(z.real());
  const Real b = abs(z.imag());
  const Real hi = a > b ? a : b;
  if (hi == Real(0)) return Real(0);
  const Real lo = (a > b ? b : a) / hi;
  return hi * sqrt(Real(1) + lo * lo);
}

template <class Real>
bool is_finite(const Complex<Real>& z) {
  if constexpr (std::is_floating_point_v<Real>) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  } else {
    return boost::multiprecision::isfinite(z.real()) && boost::multiprecision::isfinite(z.imag());
  }
}

template <class Real>
double to_double(const Real& x) {
  return static_cast<double>(x);
}

template <class Real>
std::complex<double> to_double(const Complex<Real>& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

template <class To, class From>
Complex<To> complex_cast(const Complex<From>& z) {
  return {static_cast<To>(z.real()), static_cast<To>(z.imag())};
}

/// Euclidean norm of a complex vector.
template <class Real>
Real euclidean_norm(std::span<const Complex<Real>> v) {
  using std::sqrt;
  Real scale(0);
  for (const auto& c : v) scale = std::max(scale, magnitude(c));
  if (scale == Real(0)) return Real(0);
  Real sum(0);
  for (const auto& c : v) {
    const Real r = c.real() / scale;
    const Real i = c.imag() / scale;
    sum += r * r + i * i;
  }
  return scale * sqrt(sum);
}

template <class Real>
Real euclidean_norm(const CVector<Real>& v) {
  return euclidean_norm<Real>(std::span<const Complex<Real>>(v));
}

template <class Real>
CVector<Real> zero_vector(int n) {
  return CVector<Real>(static_cast<std::size_t>(n), Complex<Real>(0));
}

/// Principal-branch complex square root, generic over the real type.
template <class Real>
Complex<Real> principal_sqrt(const Complex<Real>& z) {
  using std::abs;
  using std::sqrt;
  const Real r = magnitude(z);
  if (r == Real(0)) return Complex<Real>(0);
  const Real x = z.real();
  const Real y = z.imag();
  if (x >= Real(0)) {
    const Real t = sqrt((r + x) / 2);
    return {t, y / (2 * t)};
  }
  const Real t = sqrt((r - x) / 2);
  return {abs(y) / (2 * t), y < Real(0) ? -t : t};
}

}  // namespace gevrey
