#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gevrey/convolution.hpp"
#include "gevrey/error.hpp"
#include "gevrey/linalg.hpp"
#include "gevrey/problem.hpp"
#include "gevrey/series.hpp"
#include "gevrey/solver_z.hpp"

namespace gevrey {

/// Formal solution sum_i a_i(z) eps^i, each a_i a z-series through order K_z.
template <class Real>
struct EpsFormalSolution {
  std::vector<VecSeries<Real>> a;
  MatSeries<Real> T0;
  MatSeries<Real> T0_inv;
  int I = 0;
  int K_z = 0;
  std::vector<double> residuals;  // relative residual of the defining relation, per i
};

/// a_0(z) = sum_{j>=1} a_{0,j} z^j solving F(0, z, a_0) = 0; the coefficient
/// recursion is the z-recursion at eps = 0.
template <class Real>
VecSeries<Real> solve_a0(const ProblemSpec<Real>& p, int K_z) {
  return detail::z_recursion(p, Complex<Real>(0), K_z).as_series();
}

namespace detail {

template <class Real>
using SeriesVec = std::vector<Series<Real>>;

template <class Real>
SeriesVec<Real> split(const VecSeries<Real>& v) {
  SeriesVec<Real> out;
  for (int i = 0; i < v.nu(); ++i) out.push_back(v.component(i));
  return out;
}

template <class Real>
VecSeries<Real> join(const SeriesVec<Real>& s) {
  return VecSeries<Real>::from_components(s);
}

// z^q * s truncated back to order K.
template <class Real>
Series<Real> shift_truncate(const Series<Real>& s, int q, int K) {
  if (q == 0) return s.truncate(K);
  std::vector<Complex<Real>> c(static_cast<std::size_t>(K + 1), Complex<Real>(0));
  for (int k = 0; k + q <= K && k <= s.order(); ++k) c[k + q] = s[k];
  return Series<Real>(s.var(), std::move(c));
}

}  // namespace detail

template <class Real>
struct T0Result {
  MatSeries<Real> T0;
  MatSeries<Real> T0_inv;
  double c0 = 0.0;  // ||A_{0,1}(0)^{-1}||
  double b = 0.0;   // c0 * max_{|z| = kappa} ||T0(z) - T0(0)||
  double kappa = 0.0;
};

/// T_0(z): Jacobian of sum_m B_{0,m}(z) f^m at f = a_0(z), and its inverse.
template <class Real>
T0Result<Real> build_T0(const ProblemSpec<Real>& p, const VecSeries<Real>& a0, int K_z,
                        std::optional<double> kappa = std::nullopt) {
  const int nu = p.nu;
  const Complex<Real> zero(0);
  const auto a0c = detail::split(a0.truncate(K_z));
  const Series<Real> zs = Series<Real>::zero(Var::z, K_z);
  MatSeries<Real> T0(Var::z, nu, K_z);
  for (const auto& t : p.tensors) {
    if (t.m == 0 || t.n > K_z) continue;
    const auto a = t.eps_coeff(0);
    bool any = false;
    for (const auto& x : a) any = any || x != zero;
    if (!any) continue;
    const int width = tensor_size(nu, t.m) / nu;
    // d/df of the m-linear term: every slot in turn takes the unit vector.
    for (int i = 0; i < nu; ++i)
      for (int r = 0; r < width; ++r) {
        const Complex<Real> coef = a[static_cast<std::size_t>(i * width + r)];
        if (coef == zero) continue;
        for (int slot = 0; slot < t.m; ++slot) {
          Series<Real> term = Series<Real>(Var::z, {coef}, true);
          int col = 0;
          int rem = r;
          for (int s = t.m - 1; s >= 0; --s) {
            const int idx = rem % nu;
            rem /= nu;
            if (s == slot) col = idx;
            else term = term * a0c[static_cast<std::size_t>(idx)];
          }
          term = detail::shift_truncate(term.exact() ? term.truncate(K_z) : term, t.n, K_z);
          for (int k = 0; k <= K_z; ++k) T0[k](i, col) += term[k];
        }
      }
  }
  T0Result<Real> out;
  out.T0 = T0;
  out.T0_inv = mat_series_inverse(T0);
  out.c0 = spectral_norm(out.T0_inv[0]);
  if (kappa) {
    out.kappa = *kappa;
    double worst = 0.0;
    for (int q = 0; q < 64; ++q) {
      const auto z = complex_cast<Real>(std::polar(*kappa, 2.0 * std::numbers::pi * q / 64));
      Matrix<Real> d = T0.evaluate(z) - T0[0];
      worst = std::max(worst, spectral_norm(d));
    }
    out.b = out.c0 * worst;
  }
  return out;
}

/// a_i = T_0^{-1} ( z a'_{i-1} - sum_{n>=1} sum_m B_{n,m} (a*...*a)_{i-n}
///                  - sum_m B_{0,m} (a*...*a)_i |_{a_i = 0} ),
/// i.e. the complete eps^i coefficient of the equation with the a_i-linear
/// part T_0 a_i moved to the left. Returns a_i and stores the residual.
template <class Real>
VecSeries<Real> solve_ai(const ProblemSpec<Real>& p, const std::vector<VecSeries<Real>>& a,
                         const T0Result<Real>& t0, int i, int K_z, double* residual = nullptr) {
  if (i < 1 || static_cast<int>(a.size()) < i)
    throw Error(ErrorCode::insufficient_data, "a_0 .. a_{i-1} are required for a_i");
  if (i > p.eps_known_order())
    throw Error(ErrorCode::insufficient_data, "problem data are not known to eps order " + std::to_string(i));
  const int nu = p.nu;
  const Series<Real> zs = Series<Real>::zero(Var::z, K_z);

  // z a'_{i-1}: coefficient k is k a_{i-1,k}, exact through K_z.
  detail::SeriesVec<Real> rhs(static_cast<std::size_t>(nu), zs);
  for (int c = 0; c < nu; ++c)
    for (int k = 1; k <= K_z; ++k) rhs[c][k] = Real(k) * a[static_cast<std::size_t>(i - 1)][k][c];

  // Sequence a_0 .. a_{i-1}; slot i left empty (a_i := 0).
  std::vector<std::vector<Series<Real>>> seq;
  for (int l = 0; l < i; ++l) seq.push_back(detail::split(a[static_cast<std::size_t>(l)].truncate(K_z)));

  for (const auto& t : p.tensors) {
    if (t.n > K_z) continue;
    for (int n = 0; n <= std::min(i, t.eps_degree()); ++n) {
      const auto coeff = t.eps_coeff(n);
      bool any = false;
      for (const auto& x : coeff) any = any || x != Complex<Real>(0);
      if (!any) continue;
      detail::SeriesVec<Real> v;
      if (t.m == 0) {
        if (n != i) continue;
        for (int c = 0; c < nu; ++c) v.push_back(Series<Real>(Var::z, {coeff[c]}, true).truncate(K_z));
      } else {
        v = multilinear_convolution<Series<Real>, Complex<Real>>(coeff, nu, t.m, seq, i - n, 0, zs);
      }
      for (int c = 0; c < nu; ++c) rhs[c] = rhs[c] - detail::shift_truncate(v[c], t.n, K_z);
    }
  }
  const auto rhs_v = detail::join(rhs);
  auto ai = t0.T0_inv * rhs_v;

  // Residual of T_0 a_i = rhs, relative to the size of the terms involved.
  double worst = 0.0;
  for (int k = 0; k <= K_z; ++k) {
    CVector<Real> r(static_cast<std::size_t>(nu), Complex<Real>(0));
    double scale = to_double(euclidean_norm(rhs_v[k]));
    for (int j = 0; j <= k; ++j) {
      const auto w = t0.T0[j] * ai[k - j];
      for (int c = 0; c < nu; ++c) r[c] += w[c];
      scale += to_double(t0.T0[j].frobenius_norm()) * to_double(euclidean_norm(ai[k - j]));
    }
    for (int c = 0; c < nu; ++c) r[c] -= rhs_v[k][c];
    if (scale > 0.0) worst = std::max(worst, to_double(euclidean_norm(r)) / scale);
  }
  if (worst > 1e-10)
    throw Error(ErrorCode::numerical, "defining relation residual too large at i = " + std::to_string(i));
  if (residual) *residual = worst;
  return ai;
}

/// a_0 .. a_I through z-order K_z.
template <class Real>
EpsFormalSolution<Real> solve_eps(const ProblemSpec<Real>& p, int I, int K_z) {
  if (I < 0 || K_z < 1) throw Error(ErrorCode::domain, "need I >= 0 and K_z >= 1");
  detail::require_normalized(p);
  EpsFormalSolution<Real> sol;
  sol.I = I;
  sol.K_z = K_z;
  sol.a.push_back(solve_a0(p, K_z));
  sol.residuals.push_back(0.0);
  const auto t0 = build_T0(p, sol.a.front(), K_z);
  sol.T0 = t0.T0;
  sol.T0_inv = t0.T0_inv;
  for (int i = 1; i <= I; ++i) {
    double res = 0.0;
    sol.a.push_back(solve_ai(p, sol.a, t0, i, K_z, &res));
    sol.residuals.push_back(res);
  }
  return sol;
}

/// a_i(z) evaluated at a point, for i = 0..I.
template <class Real>
std::vector<CVector<Real>> evaluate_coefficients(const EpsFormalSolution<Real>& sol, const Complex<Real>& z) {
  std::vector<CVector<Real>> out;
  for (const auto& a : sol.a) out.push_back(a.evaluate(z));
  return out;
}

struct CrossConsistencyReport {
  double max_abs = 0.0;
  double max_rel = 0.0;
  int worst_i = 0;
  int worst_k = 0;
  std::vector<std::vector<std::complex<double>>> fourier;  // [i][k-1]
};

/// Compares the eps-Taylor coefficients of f_k(eps), extracted by discrete
/// Fourier averaging on |eps| = r, with the z-coefficients a_{i,k}.
template <class Real>
CrossConsistencyReport cross_consistency(const ProblemSpec<Real>& p, int I, int K, double r = 1e-2,
                                         int points = 64) {
  if (points < 2 * I + 1) throw Error(ErrorCode::domain, "need at least 2I+1 points on the circle");
  const auto eps_sol = solve_eps(p, I, std::max(K, 1));
  const Real two_pi = 2 * pi<Real>();
  // samples[q][k-1] = f_k(eps_q)
  std::vector<ZSolution<Real>> samples;
  for (int q = 0; q < points; ++q) {
    const Real ang = two_pi * Real(q) / Real(points);
    using std::cos;
    using std::sin;
    const Complex<Real> eps(Real(r) * cos(ang), Real(r) * sin(ang));
    samples.push_back(solve_coeffs_z(p, eps, K));
  }
  CrossConsistencyReport rep;
  rep.fourier.assign(static_cast<std::size_t>(I + 1), {});
  const int nu = p.nu;
  for (int i = 0; i <= I; ++i) {
    Real ri(1);
    for (int j = 0; j < i; ++j) ri *= Real(r);
    for (int k = 1; k <= K; ++k) {
      CVector<Real> acc(static_cast<std::size_t>(nu), Complex<Real>(0));
      for (int q = 0; q < points; ++q) {
        using std::cos;
        using std::sin;
        const Real ang = -two_pi * Real((static_cast<long>(q) * i) % points) / Real(points);
        const Complex<Real> w(cos(ang), sin(ang));
        for (int c = 0; c < nu; ++c) acc[c] += samples[q].f(k)[c] * w;
      }
      CVector<Real> diff(static_cast<std::size_t>(nu));
      for (int c = 0; c < nu; ++c) {
        acc[c] /= Real(points) * ri;
        diff[c] = acc[c] - eps_sol.a[static_cast<std::size_t>(i)][k][c];
      }
      rep.fourier[i].push_back(to_double(acc[0]));
      const double d = to_double(euclidean_norm(diff));
      const double ref = to_double(euclidean_norm(eps_sol.a[static_cast<std::size_t>(i)][k]));
      if (d > rep.max_abs) {
        rep.max_abs = d;
        rep.worst_i = i;
        rep.worst_k = k;
      }
      rep.max_rel = std::max(rep.max_rel, d / std::max(1.0, ref));
    }
  }
  return rep;
}

}  // namespace gevrey
