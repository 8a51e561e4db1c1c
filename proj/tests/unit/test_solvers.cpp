#include <gtest/gtest.h>

#include <gevrey/riccati_reference.hpp>
#include <gevrey/sector.hpp>
#include <gevrey/solver_eps.hpp>
#include <gevrey/solver_z.hpp>

#include "oracles.hpp"

using namespace gevrey;
using cd = std::complex<double>;

namespace {

ProblemSpec<double> scalar(std::vector<std::tuple<int, int, std::vector<cd>>> blocks) {
  ProblemSpec<double> p;
  for (auto& [n, m, c] : blocks) p.tensors.push_back({n, m, {Series<double>(Var::eps, c, true)}});
  return p;
}

}  // namespace

TEST(SolveZ, RiccatiFirstCoefficients) {
  const auto p = builtin_riccati<double>();
  for (cd eps : {cd(0.1), cd(0.3, 0.2), cd(0.0), cd(-0.2, 0.05)}) {
    const auto sol = solve_coeffs_z(p, eps, 2);
    EXPECT_NEAR(std::abs(sol.f(1)[0] - 1.0 / (2.0 * (1.0 + eps))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(sol.f(2)[0] + 1.0 / ((1.0 + eps) * (1.0 + 2.0 * eps))), 0.0, 1e-14);
  }
  const auto zero = solve_coeffs_z(p, cd(0), 2);
  EXPECT_EQ(zero.f(1)[0], cd(0.5));
  EXPECT_EQ(zero.f(2)[0], cd(-1));
}

TEST(SolveZ, MatchesHandRecursion) {
  const auto p = builtin_riccati<double>();
  for (cd eps : {cd(0.1), cd(0.05, 0.02), cd(0.5, -0.3)}) {
    const auto sol = solve_coeffs_z(p, eps, 60);
    const auto want = oracle::riccati_fk(eps, 60);
    for (int k = 1; k <= 60; ++k)
      EXPECT_NEAR(std::abs(sol.f(k)[0] - want[k]), 0.0, 1e-12 * (1 + std::abs(want[k]))) << k;
    for (double r : sol.residuals) EXPECT_LE(r, 1e-10);
  }
}

TEST(SolveZ, ResonanceIsReported) {
  const auto p = builtin_riccati<double>();
  try {
    (void)solve_coeffs_z(p, cd(-0.5), 5);
    FAIL();
  } catch (const ResonanceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::resonance);
    EXPECT_EQ(e.k(), 2);
  }
}

TEST(SolveZ, RequiresNormalizedProblem) {
  EXPECT_THROW((void)solve_coeffs_z(riccati_raw<double>({cd(1)}), cd(0.1), 3), Error);
}

TEST(SolveZ, ScalingOfTheForcing) {
  for (double lambda : {0.5, 3.0}) {
    const auto a = solve_coeffs_z(scalar({{0, 1, {-1.0}}, {1, 0, {1.0}}, {1, 2, {2.0}}}), cd(0.2), 1);
    const auto b = solve_coeffs_z(scalar({{0, 1, {-1.0}}, {1, 0, {lambda}}, {1, 2, {2.0}}}), cd(0.2), 1);
    EXPECT_NEAR(std::abs(b.f(1)[0] - lambda * a.f(1)[0]), 0.0, 1e-15);
  }
}

TEST(EvaluateF, MatchesClosedForm) {
  const auto p = builtin_riccati<double>();
  const auto sol = solve_coeffs_z(p, cd(0.1), 60);
  const auto v = evaluate_f(sol, cd(0.05));
  EXPECT_NEAR(std::abs(v.value[0] - shifted_reference(0.1, 0.05)), 0.0, 1e-8);
  const auto at0 = evaluate_f(sol, cd(0));
  EXPECT_EQ(at0.value[0], cd(0));
  EXPECT_EQ(at0.tail_bound, 0.0);
}

TEST(EvaluateF, TailFlags) {
  auto p = builtin_riccati<double>();
  p.rho = 1.0 / 8;
  p = rescale_z(p, cd(1.0 / 20));
  const auto radii = radius_estimates(p, 2.0);
  const auto sol = solve_coeffs_z(p, cd(0.1), 30, TailParams{radii.alpha, radii.kappa, kConvTamingA});
  const auto inside = evaluate_f(sol, cd(0.5 * radii.kappa));
  EXPECT_TRUE(inside.tail_valid);
  EXPECT_GT(inside.tail_bound, 0.0);
  EXPECT_FALSE(evaluate_f(sol, cd(2 * radii.kappa)).tail_valid);
  EXPECT_FALSE(evaluate_f(solve_coeffs_z(p, cd(0.1), 30), cd(0.01)).tail_valid);
}

TEST(OdeResidualZ, SeriesSolution) {
  const auto p = builtin_riccati<double>();
  const auto sol = solve_coeffs_z(p, cd(0.1), 60);
  EXPECT_LE(ode_residual_z(p, sol, disc_grid<double>(0.05, 4, 32)), 1e-9);
}

TEST(OdeResidualZ, LowTruncationSlope) {
  // With K = 1 the residual is exactly 2 f_1 z^2 - 2 f_1^2 z^3, so the
  // log-log slope tends to 2 from below. The O(z) terms cancel, leaving
  // rounding of order 1e-16 z.
  const auto p = builtin_riccati<double>();
  const auto sol = solve_coeffs_z(p, cd(0.1), 1);
  const double f1 = 0.5 / 1.1;
  for (double z : {1e-2, 1e-3, 1e-4})
    EXPECT_NEAR(ode_residual_z(p, sol, {cd(z)}), 2 * f1 * z * z - 2 * f1 * f1 * z * z * z, 1e-15 * z);
  const double r1 = ode_residual_z(p, sol, {cd(1e-3)});
  const double r2 = ode_residual_z(p, sol, {cd(1e-4)});
  EXPECT_NEAR(std::log10(r1 / r2), 2.0, 1e-3);
}

TEST(OdeResidualZ, ZeroProblem) {
  const auto p = scalar({{0, 1, {-1.0}}});
  const auto sol = solve_coeffs_z(p, cd(0.3), 10);
  EXPECT_EQ(ode_residual_z(p, sol, disc_grid<double>(0.5, 2, 8)), 0.0);
}

TEST(LimitToA0, DecreasesAlongDyadicSequence) {
  const auto p = builtin_riccati<double>();
  std::vector<cd> eps;
  for (int j = 1; j <= 12; ++j) eps.emplace_back(std::ldexp(1.0, -j));
  const auto t = limit_to_a0(p, eps, cd(0.05));
  EXPECT_TRUE(t.monotone);
  // At |z| = 0.05 the gap is O(eps z) and ends near 5e-6; closer to the
  // origin it is below 1e-6.
  EXPECT_LT(t.rows.back().distance, 1e-5);
  const auto t2 = limit_to_a0(p, eps, cd(0.005));
  EXPECT_TRUE(t2.monotone);
  EXPECT_LT(t2.rows.back().distance, 1e-6);
  const auto t0 = limit_to_a0(p, eps, cd(0));
  for (const auto& r : t0.rows) EXPECT_EQ(r.distance, 0.0);
}

TEST(SolveA0, RiccatiCatalanCoefficients) {
  const auto a0 = solve_a0(builtin_riccati<double>(), 25);
  const auto want = oracle::riccati_a0(25);
  for (int k = 0; k <= 25; ++k) EXPECT_NEAR(std::abs(a0[k][0] - want[k]), 0.0, 1e-12 * (1 + std::abs(want[k])));
}

TEST(SolveA0, SimpleProblems) {
  const auto lin = solve_a0(scalar({{0, 1, {-1.0}}, {1, 0, {1.0}}}), 6);
  EXPECT_EQ(lin[1][0], cd(1));
  for (int k = 2; k <= 6; ++k) EXPECT_EQ(lin[k][0], cd(0));
  const auto none = solve_a0(scalar({{0, 1, {-1.0}}, {1, 1, {3.0}}}), 6);
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(none[k][0], cd(0));
}

TEST(BuildT0, RiccatiIsMinusSqrt) {
  const auto p = builtin_riccati<double>();
  const int K = 20;
  const auto a0 = solve_a0(p, K);
  const auto t0 = build_T0(p, a0, K, 0.1);
  const auto t = t0.T0.entry(0, 0);
  const auto sq = t * t;
  EXPECT_NEAR(std::abs(sq[0] - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(sq[1] - 4.0), 0.0, 1e-14);
  for (int k = 2; k <= K; ++k) EXPECT_NEAR(std::abs(sq[k]), 0.0, 1e-9) << k;
  const double want[] = {-1, -2, 2, -4};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(t[k] - want[k]), 0.0, 1e-14);
  EXPECT_NEAR(t0.c0, 1.0, 1e-14);
  EXPECT_GT(t0.b, 0.0);
}

TEST(BuildT0, LinearProblemKeepsB01) {
  const auto p = scalar({{0, 1, {-1.0}}, {1, 1, {-3.0}}, {1, 0, {1.0}}});
  const auto t = build_T0(p, solve_a0(p, 8), 8).T0.entry(0, 0);
  EXPECT_EQ(t[0], cd(-1));
  EXPECT_EQ(t[1], cd(-3));
  for (int k = 2; k <= 8; ++k) EXPECT_EQ(t[k], cd(0));
}

TEST(SolveEps, RiccatiA1AndA2) {
  const auto sol = solve_eps(builtin_riccati<double>(), 2, 10);
  const double a1[] = {0, -0.5, 3, -14.5, 65};
  const double a2[] = {0, 0.5, -7, 59, -400};
  for (int k = 0; k < 5; ++k) {
    EXPECT_NEAR(std::abs(sol.a[1][k][0] - a1[k]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(sol.a[2][k][0] - a2[k]), 0.0, 1e-12);
  }
  for (double r : sol.residuals) EXPECT_LE(r, 1e-10);
}

TEST(SolveEps, A1MatchesClosedForm) {
  // a_1 = -2z / ((1+4z)(1+sqrt(1+4z))^2)
  const auto sol = solve_eps(builtin_riccati<double>(), 1, 40);
  for (double z : {0.01, 0.03, -0.02}) {
    const double s = std::sqrt(1 + 4 * z);
    const double want = -2 * z / ((1 + 4 * z) * (1 + s) * (1 + s));
    EXPECT_NEAR(std::abs(sol.a[1].evaluate(cd(z))[0] - want), 0.0, 1e-13);
  }
}

TEST(SolveEps, MatchesTaylorOfZCoefficients) {
  // f_k(eps) from the hand recursion is rational in eps; its Taylor
  // coefficients by a Cauchy integral on |eps| = 0.1 must agree with a_{i,k}.
  // The nearest pole is at -1/8, so aliasing is below 0.8^256.
  const int I = 6, K = 8, N = 256;
  const auto sol = solve_eps(builtin_riccati<double>(), I, K);
  for (int i = 0; i <= I; ++i)
    for (int k = 1; k <= K; ++k) {
      cd acc = 0.0;
      double peak = 0.0;
      for (int q = 0; q < N; ++q) {
        const cd e = std::polar(0.1, 2 * std::numbers::pi * q / N);
        const cd fk = oracle::riccati_fk(e, K)[k];
        peak = std::max(peak, std::abs(fk));
        acc += fk * std::pow(e, -i);
      }
      acc /= double(N);
      // Rounding in f_k is amplified by 0.1^-i.
      const double tol = 1e-15 * peak * std::pow(0.1, -i);
      EXPECT_NEAR(std::abs(acc - sol.a[i][k][0]), 0.0, tol) << i << "," << k;
    }
}

TEST(SolveEps, EpsIndependentProblemOnlyUsesDerivativeTerm) {
  const auto p = scalar({{0, 1, {-1.0}}, {1, 0, {1.0}}});
  const auto sol = solve_eps(p, 3, 6);
  // a_0 = z, a_i = -z a'_{i-1} => a_i = (-1)^i z.
  for (int i = 0; i <= 3; ++i) {
    EXPECT_EQ(sol.a[i][1][0], cd(i % 2 ? -1 : 1));
    for (int k = 2; k <= 6; ++k) EXPECT_EQ(sol.a[i][k][0], cd(0));
  }
  const auto zero = solve_eps(scalar({{0, 1, {-1.0}}, {2, 1, {1.0}}}), 3, 6);
  for (int i = 1; i <= 3; ++i)
    for (int k = 0; k <= 6; ++k) EXPECT_EQ(zero.a[i][k][0], cd(0));
}

TEST(SolveEps, VectorProblemDefiningRelation) {
  // nu = 2 with an eps-dependent linear block and a quadratic coupling.
  ProblemSpec<double> p;
  p.nu = 2;
  auto e = [](std::vector<cd> c) { return Series<double>(Var::eps, std::move(c), true); };
  p.tensors.push_back({0, 1, {e({-1.0}), e({0.0, 0.3}), e({0.2}), e({-2.0})}});
  p.tensors.push_back({1, 0, {e({1.0}), e({0.0, 0.5})}});
  CoeffTensor<double> q{1, 2, {}};
  for (int j = 0; j < 8; ++j) q.entries.push_back(e({0.1 * (j + 1)}));
  p.tensors.push_back(q);
  p.validate();
  const int I = 5, K = 10;
  const auto sol = solve_eps(p, I, K);
  for (double r : sol.residuals) EXPECT_LE(r, 1e-10);
  // Truncated double series solves the ODE to O(eps^{I+1}) + O(z^{K+1}).
  for (double eps : {1e-2, 2e-2}) {
    const cd z = 1e-2;
    CVector<double> f(2, 0.0), zdf(2, 0.0);
    for (int i = 0; i <= I; ++i) {
      const cd ei = std::pow(eps, i);
      for (int k = 1; k <= K; ++k)
        for (int c = 0; c < 2; ++c) {
          f[c] += sol.a[i][k][c] * ei * std::pow(z, k);
          zdf[c] += double(k) * sol.a[i][k][c] * ei * std::pow(z, k);
        }
    }
    const auto rhs = evaluate_rhs(p, cd(eps), z, f);
    for (int c = 0; c < 2; ++c) EXPECT_LE(std::abs(eps * zdf[c] - rhs[c]), 1e3 * std::pow(eps, I + 1) * std::abs(z));
  }
  // And agrees with solver-z at a small eps.
  const auto zs = solve_coeffs_z(p, cd(1e-3), K);
  for (int k = 1; k <= K; ++k) {
    CVector<double> v(2, 0.0);
    for (int i = 0; i <= I; ++i)
      for (int c = 0; c < 2; ++c) v[c] += sol.a[i][k][c] * std::pow(1e-3, i);
    for (int c = 0; c < 2; ++c) EXPECT_NEAR(std::abs(v[c] - zs.f(k)[c]), 0.0, 1e-12 * std::pow(8.0, k));
  }
}

TEST(CrossConsistency, RiccatiDouble) {
  const auto r = cross_consistency(builtin_riccati<double>(), 4, 6, 1e-1, 64);
  EXPECT_LE(r.max_rel, 1e-8);
  EXPECT_NEAR(std::abs(r.fourier[2][1] + 7.0), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(r.fourier[0][0] - 0.5), 0.0, 1e-12);
}

TEST(CrossConsistency, LinearDiagonalProblem) {
  const auto r = cross_consistency(scalar({{0, 1, {-1.0, 0.5}}, {1, 0, {1.0}}}), 4, 3, 1e-1, 64);
  EXPECT_LE(r.max_abs, 1e-12);
}
