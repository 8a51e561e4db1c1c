#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "gevrey/error.hpp"
#include "gevrey/numeric.hpp"

namespace gevrey {

/// phi_0(z) = -1 / (1 + sqrt(1 + 4z)), principal branch, cut (-inf, -1/4].
template <class Real>
Complex<Real> phi0(const Complex<Real>& z) {
  const Complex<Real> w = Complex<Real>(1) + Real(4) * z;
  if (w.imag() == Real(0) && w.real() <= Real(0))
    throw Error(ErrorCode::branch, "phi0: z lies on the branch cut (-inf, -1/4]");
  return Complex<Real>(-1) / (Complex<Real>(1) + principal_sqrt(w));
}

template <class Real>
Real bessel_ratio_tolerance() {
  if constexpr (std::is_same_v<Real, double>) return Real(1e-15);
  else return Real(10) * machine_epsilon<Real>();
}

/// I_nu(x) / I_{nu-1}(x) = 1/(2nu/x + 1/(2(nu+1)/x + ...)) by modified Lentz.
template <class Real>
Real bessel_i_ratio(const Real& nu, const Real& x, int max_depth = 10000) {
  using std::abs;
  if (!(x > Real(0)) || !(nu > Real(0)))
    throw Error(ErrorCode::domain, "Bessel ratio needs nu > 0 and x > 0");
  const Real tol = bessel_ratio_tolerance<Real>();
  const Real tiny = std::numeric_limits<Real>::min() * Real(1e10);
  Real f = tiny;
  Real c = f;
  Real d = 0;
  for (int j = 1; j <= max_depth; ++j) {
    const Real b = Real(2) * (nu + Real(j - 1)) / x;
    d = b + d;
    if (d == Real(0)) d = tiny;
    c = b + Real(1) / c;
    if (c == Real(0)) c = tiny;
    d = Real(1) / d;
    const Real delta = c * d;
    f *= delta;
    if (abs(delta - Real(1)) < tol) return f;
  }
  throw Error(ErrorCode::evaluation, "Bessel ratio continued fraction did not converge (nu = " +
                                         std::to_string(to_double(nu)) + ", x = " +
                                         std::to_string(to_double(x)) + ")");
}

/// Bessel-ratio solution of eps z phi' + phi - 2 z phi^2 + 1/2 = 0:
/// phi_eps(z) = -(1 / (2 sqrt z)) I_kappa(x) / I_{kappa-1}(x), kappa = 1/eps, x = 2 sqrt(z)/eps.
template <class Real>
Real phi_eps(const Real& eps, const Real& z, const Real& z_max = Real(4)) {
  using std::sqrt;
  if (!(eps > Real(0)) || eps > Real(2)) throw Error(ErrorCode::domain, "phi_eps needs 0 < eps <= 2");
  if (!(z > Real(0)) || z > z_max) throw Error(ErrorCode::domain, "phi_eps needs 0 < z <= z_max");
  const Real sz = sqrt(z);
  const Real kappa = Real(1) / eps;
  const Real x = Real(2) * sz / eps;
  return -bessel_i_ratio(kappa, x) / (Real(2) * sz);
}

/// phi_eps(z) + 1/2, the solution of the normalized Riccati problem.
template <class Real>
Real shifted_reference(const Real& eps, const Real& z) {
  return phi_eps(eps, z) + Real(0.5);
}

/// |eps z phi' + phi - 2 z phi^2 + 1/2| with phi' from central differences
/// (step h and h/2, Richardson-combined).
inline double riccati_reference_residual(double eps, double z, double h = 1e-6) {
  auto central = [&](double step) {
    return (phi_eps(eps, z + step) - phi_eps(eps, z - step)) / (2.0 * step);
  };
  const double d1 = central(h);
  const double d2 = central(h / 2.0);
  const double dphi = (4.0 * d2 - d1) / 3.0;
  const double phi = phi_eps(eps, z);
  return std::abs(eps * z * dphi + phi - 2.0 * z * phi * phi + 0.5);
}

}  // namespace gevrey
