#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gevrey/convolution.hpp"
#include "gevrey/error.hpp"
#include "gevrey/linalg.hpp"
#include "gevrey/problem.hpp"
#include "gevrey/series.hpp"

namespace gevrey {

/// Parameters of the majorant phi_l <= alpha A / l^2 kappa^{-l}.
struct TailParams {
  double alpha = 0.0;
  double kappa = 0.0;
  double A = 0.0;
};

template <class Real>
struct ZSolution {
  Complex<Real> eps;
  int K = 0;
  VecSequence<Real> coeffs;       // f_1 .. f_K, offset 1
  std::vector<double> residuals;  // ||(eps k I - A01) f_k - g_k|| per k
  std::optional<TailParams> tail;

  const CVector<Real>& f(int k) const { return coeffs.items[static_cast<std::size_t>(k - 1)]; }

  /// f(eps, z) as a z-series with zero constant term, truncated at K.
  VecSeries<Real> as_series() const {
    std::vector<CVector<Real>> c;
    c.push_back(CVector<Real>(static_cast<std::size_t>(coeffs.nu()), Complex<Real>(0)));
    for (const auto& v : coeffs.items) c.push_back(v);
    return VecSeries<Real>(Var::z, std::move(c));
  }
};

namespace detail {

template <class Real>
void require_normalized(const ProblemSpec<Real>& p) {
  if (p.has_constant_block())
    throw Error(ErrorCode::domain, "problem has a nonzero A_{0,0} block; run normalize_shift first");
}

// Coefficient recursion (eps k I - A_{0,1}(eps)) f_k = g_k with
// g_k = [z^k] sum_{(n,m) != (0,1)} A_{n,m}(eps) z^n f^m.
template <class Real>
ZSolution<Real> z_recursion(const ProblemSpec<Real>& p, const Complex<Real>& eps, int K) {
  require_normalized(p);
  if (K < 1) throw Error(ErrorCode::domain, "truncation K must be >= 1");
  const int nu = p.nu;
  struct Block {
    int n, m;
    CVector<Real> a;
  };
  std::vector<Block> blocks;
  for (const auto& t : p.tensors)
    if (!(t.n == 0 && t.m <= 1) && !t.is_zero()) blocks.push_back({t.n, t.m, t.at(eps)});
  const Matrix<Real> a01 = p.a01(eps);

  ZSolution<Real> sol;
  sol.eps = eps;
  sol.K = K;
  sol.coeffs.offset = 1;
  std::vector<CVector<Real>> seq(1);  // seq[l] = f_l; seq[0] left empty
  const Complex<Real> zero(0);
  for (int k = 1; k <= K; ++k) {
    CVector<Real> g(static_cast<std::size_t>(nu), zero);
    for (const auto& b : blocks) {
      if (b.m == 0) {
        if (b.n == k)
          for (int i = 0; i < nu; ++i) g[i] += b.a[i];
        continue;
      }
      if (k - b.n < b.m) continue;
      const auto v = multilinear_convolution<Complex<Real>, Complex<Real>>(b.a, nu, b.m, seq, k - b.n, 1, zero);
      for (int i = 0; i < nu; ++i) g[i] += v[i];
    }
    const Matrix<Real> m = Matrix<Real>::identity(nu) * (eps * Real(k)) - a01;
    const auto sv = singular_values(m);
    if (!(sv.back() > 1e-10 * sv.front()))
      throw ResonanceError("eps*k = " + std::to_string(k) + "*(" + std::to_string(to_double(eps.real())) +
                               ", " + std::to_string(to_double(eps.imag())) +
                               ") is resonant with the spectrum of A_{0,1}",
                           k, to_double(eps));
    LuDecomposition<Real> lu(m);
    CVector<Real> fk = lu.solve(g);
    CVector<Real> r = m * fk;
    for (int i = 0; i < nu; ++i) r[i] -= g[i];
    const double res = to_double(euclidean_norm(r));
    const double scale = 1.0 + to_double(euclidean_norm(g));
    if (res > 1e-10 * scale)
      throw Error(ErrorCode::numerical, "recursion residual too large at k = " + std::to_string(k));
    sol.residuals.push_back(res / scale);
    for (const auto& c : fk)
      if (!is_finite(c)) throw Error(ErrorCode::numerical, "non-finite coefficient at k = " + std::to_string(k));
    seq.push_back(fk);
    sol.coeffs.items.push_back(std::move(fk));
  }
  return sol;
}

}  // namespace detail

/// f(eps, z) = sum_{k>=1} f_k(eps) z^k at a numeric eps, k <= K.
template <class Real>
ZSolution<Real> solve_coeffs_z(const ProblemSpec<Real>& p, const Complex<Real>& eps, int K,
                               std::optional<TailParams> tail = std::nullopt) {
  auto sol = detail::z_recursion(p, eps, K);
  sol.tail = tail;
  return sol;
}

template <class Real>
struct ZValue {
  CVector<Real> value;
  double tail_bound = 0.0;
  bool tail_valid = false;
};

/// Partial sum at z plus the majorant tail alpha A (|z|/kappa)^{K+1} / ((K+1)^2 (1 - |z|/kappa)).
template <class Real>
ZValue<Real> evaluate_f(const ZSolution<Real>& sol, const Complex<Real>& z) {
  ZValue<Real> out;
  const int nu = sol.coeffs.nu();
  out.value.assign(static_cast<std::size_t>(nu), Complex<Real>(0));
  for (int k = sol.K; k >= 1; --k)
    for (int i = 0; i < nu; ++i) out.value[i] = (out.value[i] + sol.f(k)[i]) * z;
  const double az = to_double(magnitude(z));
  if (az == 0.0) {
    out.tail_valid = true;
    return out;
  }
  if (sol.tail && az < sol.tail->kappa) {
    const double q = az / sol.tail->kappa;
    const double k1 = sol.K + 1.0;
    out.tail_bound = sol.tail->alpha * sol.tail->A * std::pow(q, k1) / (k1 * k1 * (1.0 - q));
    out.tail_valid = true;
  }
  return out;
}

/// max over the grid of ||eps z f'(z) - F(eps, z, f(z))|| for the truncated series.
template <class Real>
double ode_residual_z(const ProblemSpec<Real>& p, const ZSolution<Real>& sol,
                      const std::vector<Complex<Real>>& z_grid) {
  const int nu = p.nu;
  double worst = 0.0;
  for (const auto& z : z_grid) {
    CVector<Real> f(static_cast<std::size_t>(nu), Complex<Real>(0));
    CVector<Real> zdf(static_cast<std::size_t>(nu), Complex<Real>(0));
    Complex<Real> zk(1);
    for (int k = 1; k <= sol.K; ++k) {
      zk *= z;
      for (int i = 0; i < nu; ++i) {
        f[i] += sol.f(k)[i] * zk;
        zdf[i] += Real(k) * sol.f(k)[i] * zk;
      }
    }
    const auto rhs = evaluate_rhs(p, sol.eps, z, f);
    CVector<Real> r(static_cast<std::size_t>(nu));
    for (int i = 0; i < nu; ++i) r[i] = sol.eps * zdf[i] - rhs[i];
    worst = std::max(worst, to_double(euclidean_norm(r)));
  }
  return worst;
}

/// Circle of radius r with n points plus the centre, a convenient residual grid.
template <class Real>
std::vector<Complex<Real>> disc_grid(double r, int rings, int per_ring) {
  std::vector<Complex<Real>> g{Complex<Real>(0)};
  for (int j = 1; j <= rings; ++j)
    for (int q = 0; q < per_ring; ++q) {
      const auto w = std::polar(r * j / rings, 2.0 * std::numbers::pi * q / per_ring);
      g.push_back(complex_cast<Real>(w));
    }
  return g;
}

struct LimitRow {
  double eps = 0.0;
  double distance = 0.0;
};

struct LimitTable {
  std::vector<LimitRow> rows;
  bool monotone = false;
};

/// ||f(eps_j, z) - a_0(z)|| along a sequence eps_j -> 0, with a_0 the eps = 0
/// solution of the same recursion (F(0, z, a_0) = 0).
template <class Real>
LimitTable limit_to_a0(const ProblemSpec<Real>& p, const std::vector<Complex<Real>>& eps_seq,
                       const Complex<Real>& z, int K = 60) {
  const auto a0 = detail::z_recursion(p, Complex<Real>(0), K);
  const auto a0z = evaluate_f(a0, z).value;
  LimitTable t;
  t.monotone = true;
  for (const auto& e : eps_seq) {
    const auto sol = detail::z_recursion(p, e, K);
    auto v = evaluate_f(sol, z).value;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= a0z[i];
    const double d = to_double(euclidean_norm(v));
    if (!t.rows.empty() && d > t.rows.back().distance) t.monotone = false;
    t.rows.push_back({to_double(magnitude(e)), d});
  }
  return t;
}

}  // namespace gevrey
