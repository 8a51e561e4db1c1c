#pragma once

// Independent reference computations for the test suite. Nothing here calls
// into the library's recursions; each oracle is a direct, slow evaluation.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

namespace oracle {

using cd = std::complex<double>;

/// All compositions l_1 + ... + l_m = k with parts >= min_part.
inline void for_each_composition(int m, int k, int min_part, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> parts(static_cast<std::size_t>(m), 0);
  std::function<void(int, int)> rec = [&](int slot, int left) {
    if (slot == m - 1) {
      if (left >= min_part) {
        parts[slot] = left;
        fn(parts);
      }
      return;
    }
    for (int l = min_part; l <= left - (m - 1 - slot) * min_part; ++l) {
      parts[slot] = l;
      rec(slot + 1, left - l);
    }
  };
  if (m >= 1 && k >= m * min_part) rec(0, k);
}

/// Componentwise m-fold convolution by explicit enumeration; seqs[j][l] is
/// the scalar item l of sequence j (missing items are zero).
inline cd brute_convolution(const std::vector<std::vector<cd>>& seqs, int k, int min_part) {
  cd acc = 0.0;
  const int m = static_cast<int>(seqs.size());
  for_each_composition(m, k, min_part, [&](const std::vector<int>& parts) {
    cd term = 1.0;
    for (int j = 0; j < m; ++j) {
      const auto& s = seqs[static_cast<std::size_t>(j)];
      term *= parts[j] < static_cast<int>(s.size()) ? s[static_cast<std::size_t>(parts[j])] : cd(0.0);
    }
    acc += term;
  });
  return acc;
}

/// Double-loop Cauchy product through order K.
inline std::vector<cd> cauchy_product(const std::vector<cd>& p, const std::vector<cd>& q, int K) {
  std::vector<cd> c(static_cast<std::size_t>(K + 1), 0.0);
  for (int i = 0; i < static_cast<int>(p.size()); ++i)
    for (int j = 0; j < static_cast<int>(q.size()); ++j)
      if (i + j <= K) c[i + j] += p[i] * q[j];
  return c;
}

/// Hand-written z-recursion for the normalized scalar Riccati
///   eps z f' = -(1 + 2z) f + z/2 + 2 z f^2,
/// i.e. (eps k + 1) f_k = [k = 1]/2 - 2 f_{k-1} + 2 sum_{l=1}^{k-2} f_l f_{k-1-l}.
inline std::vector<cd> riccati_fk(cd eps, int K) {
  std::vector<cd> f(static_cast<std::size_t>(K + 1), 0.0);
  for (int k = 1; k <= K; ++k) {
    cd g = k == 1 ? cd(0.5) : cd(0.0);
    g -= 2.0 * f[k - 1];
    for (int l = 1; l <= k - 2; ++l) g += 2.0 * f[l] * f[k - 1 - l];
    f[k] = g / (eps * double(k) + 1.0);
  }
  return f;
}

/// Catalan numbers C_0..C_n by the integer recurrence.
inline std::vector<double> catalan(int n) {
  std::vector<double> c(static_cast<std::size_t>(n + 1), 0.0);
  c[0] = 1.0;
  for (int j = 1; j <= n; ++j)
    for (int i = 0; i < j; ++i) c[j] += c[i] * c[j - 1 - i];
  return c;
}

/// Taylor coefficients of 1/2 - 1/(1 + sqrt(1 + 4z)) = sum_{j>=1} (-1)^{j+1} C_j z^j / 2.
inline std::vector<double> riccati_a0(int K) {
  const auto c = catalan(K);
  std::vector<double> a(static_cast<std::size_t>(K + 1), 0.0);
  for (int j = 1; j <= K; ++j) a[j] = (j % 2 ? 0.5 : -0.5) * c[j];
  return a;
}

/// (1/eps) int_0^inf e^{-t/eps} / (1 + t) dt, the Borel sum of sum_i i! (-eps)^i.
inline double stieltjes(double eps) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [eps](double t) { return std::exp(-t / eps) / (1.0 + t) / eps; };
  return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-15);
}

/// Five-point central difference.
inline cd derivative(const std::function<cd(cd)>& f, cd x, double h = 1e-4) {
  return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
}

/// Dense grid maximum of (kappa - r)^k sum_n |c_n| r^n on [0, kappa].
inline double nagumo_grid(const std::vector<double>& m, int k, double kappa, int points = 200000) {
  double best = 0.0;
  for (int j = 0; j <= points; ++j) {
    const double r = kappa * j / points;
    double acc = 0.0;
    for (auto it = m.rbegin(); it != m.rend(); ++it) acc = acc * r + *it;
    best = std::max(best, std::pow(kappa - r, k) * acc);
  }
  return best;
}

}  // namespace oracle
