#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "gevrey/error.hpp"
#include "gevrey/numeric.hpp"
#include "gevrey/series.hpp"

namespace gevrey {

/// Coefficient magnitudes ||c_n|| of a series, in double.
template <class Real>
std::vector<double> majorant_coeffs(const VecSeries<Real>& f) {
  std::vector<double> m;
  for (int n = 0; n <= f.order(); ++n) m.push_back(to_double(euclidean_norm(f[n])));
  return m;
}

template <class Real>
std::vector<double> majorant_coeffs(const Series<Real>& f) {
  std::vector<double> m;
  for (int n = 0; n <= f.order(); ++n) m.push_back(to_double(magnitude(f[n])));
  return m;
}

/// M(r) = sum_n m_n r^n.
inline double majorant_eval(const std::vector<double>& m, double r) {
  double acc = 0.0;
  for (auto it = m.rbegin(); it != m.rend(); ++it) acc = acc * r + *it;
  return acc;
}

struct NagumoNorm {
  double kappa = 0.0;
  int k = 0;
  double value = 0.0;
  double r_star = 0.0;  // maximizer
};

/// sup_{0 <= r < kappa} (kappa - r)^k M(r) for the coefficient majorant M.
/// Local maxima are bracketed on a grid (g can be multimodal for sparse
/// polynomials) and refined by golden-section search.
inline NagumoNorm nagumo_norm_majorant(const std::vector<double>& m, int k, double kappa) {
  if (!(kappa > 0.0)) throw Error(ErrorCode::domain, "kappa must be positive");
  if (k < 0) throw Error(ErrorCode::domain, "Nagumo index must be nonnegative");
  NagumoNorm out{kappa, k, 0.0, 0.0};
  if (k == 0) {
    out.value = majorant_eval(m, kappa);
    out.r_star = kappa;
    return out;
  }
  auto g = [&](double r) { return std::pow(kappa - r, k) * majorant_eval(m, r); };
  const int grid = 4096;
  std::vector<double> gv(grid + 1);
  for (int j = 0; j <= grid; ++j) gv[j] = g(kappa * j / grid);
  out.value = gv[0];
  out.r_star = 0.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int j = 1; j < grid; ++j) {
    if (!(gv[j] >= gv[j - 1] && gv[j] >= gv[j + 1])) continue;
    double a = kappa * (j - 1) / grid;
    double b = kappa * (j + 1) / grid;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double g1 = g(x1);
    double g2 = g(x2);
    while (b - a > 1e-12 * std::max(b, 1e-300)) {
      if (g1 < g2) {
        a = x1;
        x1 = x2;
        g1 = g2;
        x2 = a + phi * (b - a);
        g2 = g(x2);
      } else {
        b = x2;
        x2 = x1;
        g2 = g1;
        x1 = b - phi * (b - a);
        g1 = g(x1);
      }
    }
    const double r = 0.5 * (a + b);
    const double v = std::max({g(r), gv[j]});
    if (v > out.value) {
      out.value = v;
      out.r_star = r;
    }
  }
  return out;
}

template <class Real>
NagumoNorm nagumo_norm(const VecSeries<Real>& f, int k, double kappa) {
  return nagumo_norm_majorant(majorant_coeffs(f), k, kappa);
}

template <class Real>
NagumoNorm nagumo_norm(const Series<Real>& f, int k, double kappa) {
  return nagumo_norm_majorant(majorant_coeffs(f), k, kappa);
}

/// kappa^{n+k} n^n k^k / (n+k)^{n+k}: the norm of z^n (0^0 = 1).
inline double nagumo_monomial(int n, int k, double kappa) {
  if (n + k == 0) return 1.0;
  auto xlogx = [](double x) { return x > 0 ? x * std::log(x) : 0.0; };
  const double s = n + k;
  return std::exp(s * std::log(kappa) + xlogx(n) + xlogx(k) - xlogx(s));
}

struct NagumoPropertyResult {
  bool sum_ok = false;         // ||f+g||_k <= ||f||_k + ||g||_k
  bool product_ok = false;     // ||fg||_{k+l} <= ||f||_k ||g||_l
  bool derivative_ok = false;  // ||f'||_{k+1} <= e (k+1) ||f||_k
  bool shift_ok = false;       // ||f||_k <= kappa ||f||_{k-1}  (k >= 1)
  bool all() const { return sum_ok && product_ok && derivative_ok && shift_ok; }
};

/// Checks the four Nagumo-norm inequalities with relative slack.
inline NagumoPropertyResult nagumo_property_suite(const Series<double>& f, const Series<double>& g, int k,
                                                  int l, double kappa, double slack = 1e-9) {
  auto nn = [&](const Series<double>& s, int idx) { return nagumo_norm(s, idx, kappa).value; };
  auto le = [&](double lhs, double rhs) { return lhs <= rhs * (1.0 + slack) + slack * 1e-300; };
  NagumoPropertyResult r;
  r.sum_ok = le(nn(f + g, k), nn(f, k) + nn(g, k));
  r.product_ok = le(nn(series_mul(f, g), k + l), nn(f, k) * nn(g, l));
  r.derivative_ok = le(nn(series_derivative(f), k + 1), std::numbers::e * (k + 1) * nn(f, k));
  r.shift_ok = k < 1 || le(nn(f, k), kappa * nn(f, k - 1));
  return r;
}

/// M(sigma): an upper bound of sup_{|z| <= sigma} ||f(z)||.
template <class Real>
double sup_norm_disc(const VecSeries<Real>& f, double sigma) {
  return majorant_eval(majorant_coeffs(f), sigma);
}

template <class Real>
double sup_norm_disc(const Series<Real>& f, double sigma) {
  return majorant_eval(majorant_coeffs(f), sigma);
}

struct GevreyFit {
  double C = 0.0;
  double mu = 0.0;
  double r2 = 0.0;
  double C_fit = 0.0;  // before inflation
  int i_min = 0;
  std::vector<double> norms;
  bool bound_holds = false;
};

/// Least squares of log(norm_i) - log(i!) against i over i >= i_min, giving
/// log mu (slope) and log C (intercept); C is then raised just enough that
/// norm_i <= C i! mu^i for every input i. norms[i] is ||a_i||.
inline GevreyFit gevrey_fit(const std::vector<double>& norms, int i_min = 3) {
  const int I = static_cast<int>(norms.size()) - 1;
  if (I < i_min + 5)
    throw Error(ErrorCode::insufficient_data,
                "need norms through i >= " + std::to_string(i_min + 5) + ", got " + std::to_string(I));
  for (double v : norms)
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::domain, "norms must be positive and finite");
  auto y = [&](int i) { return std::log(norms[i]) - std::lgamma(i + 1.0); };
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = I - i_min + 1;
  for (int i = i_min; i <= I; ++i) {
    sx += i;
    sy += y(i);
    sxx += double(i) * i;
    sxy += i * y(i);
  }
  const double xbar = sx / n;
  const double ybar = sy / n;
  const double sxx_c = sxx - n * xbar * xbar;
  const double slope = (sxy - n * xbar * ybar) / sxx_c;
  const double intercept = ybar - slope * xbar;
  double ss_res = 0, ss_tot = 0;
  for (int i = i_min; i <= I; ++i) {
    const double e = y(i) - (intercept + slope * i);
    ss_res += e * e;
    ss_tot += (y(i) - ybar) * (y(i) - ybar);
  }
  GevreyFit fit;
  fit.i_min = i_min;
  fit.norms = norms;
  fit.mu = std::exp(slope);
  fit.C_fit = std::exp(intercept);
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  double log_c = intercept;
  for (int i = 0; i <= I; ++i) log_c = std::max(log_c, y(i) - slope * i);
  fit.C = std::exp(log_c);
  fit.bound_holds = true;
  for (int i = 0; i <= I; ++i)
    if (norms[i] > fit.C * std::exp(std::lgamma(i + 1.0)) * std::pow(fit.mu, i) * (1.0 + 1e-12))
      fit.bound_holds = false;
  return fit;
}

struct RemainderProfile {
  double eps = 0.0;
  std::vector<double> abs_r;           // |r_I|, I = 0..I_max
  std::vector<double> abs_r_eps;       // |r_I eps^I| = |f - sum_{i<I} a_i eps^i|
  std::vector<double> envelope;        // max over |J - I| <= window of abs_r_eps
  int window = 2;
  int I_star = -1;                     // argmin of the envelope
  int I_star_raw = -1;                 // argmin of abs_r_eps
  bool finite = false;                 // interior minimizer with growth after it
  double shape_r2 = 0.0;               // linearity of log|r_I| - log I! up to I*
};

/// Taylor remainders r_I = eps^{-I}(f - sum_{i<I} a_i eps^i) at one (eps, z).
/// `a` holds a_i(z) for i = 0..I_max, `f` the reference value f(eps, z).
template <class Real>
RemainderProfile remainder_profile(const std::vector<CVector<Real>>& a, const CVector<Real>& f,
                                   const Complex<Real>& eps, int window = 2) {
  const int I_max = static_cast<int>(a.size()) - 1;
  if (I_max < 2 * window + 2) throw Error(ErrorCode::insufficient_data, "remainder profile needs more terms");
  RemainderProfile rp;
  rp.eps = to_double(magnitude(eps));
  rp.window = window;
  CVector<Real> partial(f.size(), Complex<Real>(0));
  Complex<Real> ep(1);
  const double log_eps = std::log(rp.eps);
  for (int I = 0; I <= I_max; ++I) {
    CVector<Real> diff(f.size());
    for (std::size_t c = 0; c < f.size(); ++c) diff[c] = f[c] - partial[c];
    const Real d = euclidean_norm(diff);
    const double dd = to_double(d);
    rp.abs_r_eps.push_back(dd);
    rp.abs_r.push_back(dd > 0 ? std::exp(std::log(dd) - I * log_eps) : 0.0);
    for (std::size_t c = 0; c < f.size(); ++c) partial[c] += a[static_cast<std::size_t>(I)][c] * ep;
    ep *= eps;
  }
  rp.envelope.assign(static_cast<std::size_t>(I_max + 1), std::numeric_limits<double>::quiet_NaN());
  double best = std::numeric_limits<double>::infinity();
  for (int I = window; I <= I_max - window; ++I) {
    double e = 0.0;
    for (int J = I - window; J <= I + window; ++J) e = std::max(e, rp.abs_r_eps[J]);
    rp.envelope[I] = e;
    if (e < best) {
      best = e;
      rp.I_star = I;
    }
  }
  double best_raw = std::numeric_limits<double>::infinity();
  for (int I = 1; I <= I_max; ++I)
    if (rp.abs_r_eps[I] < best_raw) {
      best_raw = rp.abs_r_eps[I];
      rp.I_star_raw = I;
    }
  // Finite: the envelope minimum is interior and the profile has clearly
  // turned upward within the computed range.
  const int after = rp.I_star + 5;
  rp.finite = rp.I_star > window && after <= I_max - window && rp.envelope[after] > rp.envelope[rp.I_star];
  // Shape: log|r_I| - log I! against I for 1 <= I <= I*.
  if (rp.I_star >= 4) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int n = 0;
    for (int I = 1; I <= rp.I_star; ++I) {
      if (!(rp.abs_r[I] > 0)) continue;
      const double y = std::log(rp.abs_r[I]) - std::lgamma(I + 1.0);
      sx += I;
      sy += y;
      sxx += double(I) * I;
      sxy += I * y;
      syy += y * y;
      ++n;
    }
    const double cov = sxy - sx * sy / n;
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    rp.shape_r2 = vx > 0 && vy > 0 ? cov * cov / (vx * vy) : 1.0;
  }
  return rp;
}

}  // namespace gevrey
