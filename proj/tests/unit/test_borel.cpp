#include <gtest/gtest.h>

#include <numbers>

#include <gevrey/borel.hpp>
#include <gevrey/riccati_reference.hpp>
#include <gevrey/solver_eps.hpp>

#include "oracles.hpp"

using namespace gevrey;
using cd = std::complex<double>;

namespace {

std::vector<CVector<double>> factorial_series(int I, double sign) {
  std::vector<CVector<double>> a;
  double f = 1;
  for (int i = 0; i <= I; ++i) {
    if (i) f *= i;
    a.push_back({f * std::pow(sign, i)});
  }
  return a;
}

}  // namespace

TEST(BorelTransform, FactorialCoefficients) {
  const auto d = borel_transform(factorial_series(10, 1.0));
  ASSERT_EQ(d.b.size(), 10u);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(d.b[i][0].real(), i + 1.0, 1e-12);
  EXPECT_EQ(d.a0[0], cd(1));
}

TEST(BorelTransform, EntireCase) {
  std::vector<CVector<double>> a;
  double f = 1;
  for (int i = 0; i <= 8; ++i) {
    if (i) f *= i;
    a.push_back({1.0 / f});
  }
  const auto d = borel_transform(a);
  double g = 1;
  for (int i = 0; i < 8; ++i) {
    if (i) g *= i;
    EXPECT_NEAR(d.b[i][0].real(), 1.0 / (g * g * (i + 1)), 1e-15);
  }
}

TEST(BorelTransform, NeedsFourTerms) {
  EXPECT_THROW(borel_transform(factorial_series(3, 1.0)), Error);
}

TEST(PadeContinue, ExactOnRationalTransform) {
  const auto d = borel_transform(factorial_series(10, 1.0));
  const auto p = pade_continue(d, 1, 2);
  EXPECT_EQ(p.M, 2);
  EXPECT_FALSE(p.fallback);
  ASSERT_EQ(p.poles.size(), 2u);
  for (const auto& pole : p.poles) EXPECT_NEAR(std::abs(pole.t - 1.0), 0.0, 1e-6);
  for (double t : {0.3, -2.0, 5.0}) EXPECT_NEAR(std::abs(p(cd(t)) - 1.0 / ((1 - t) * (1 - t))), 0.0, 1e-10);
}

TEST(PadeContinue, ConstantDataHasNoPoles) {
  std::vector<CVector<double>> a{{0.0}, {1.0}, {0.0}, {0.0}, {0.0}, {0.0}, {0.0}};
  const auto p = pade_continue(borel_transform(a), 2, 3);
  EXPECT_TRUE(p.poles.empty());
  EXPECT_TRUE(p.fallback);
  EXPECT_NEAR(std::abs(p(cd(3.7)) - 1.0), 0.0, 1e-15);
}

TEST(PadeContinue, OrderGuard) {
  EXPECT_THROW(pade_continue(borel_transform(factorial_series(6, 1.0)), 3, 3), Error);
}

TEST(PadeContinue, RiccatiPolesAvoidPositiveAxis) {
  const auto sol = solve_eps(builtin_riccati<double>(), 30, 60);
  const auto d = borel_transform(evaluate_coefficients(sol, cd(0.05)));
  const auto p = pade_continue(d, 14, 15);
  const double t_max = 0.2 * std::log(1e16) * 1.5;
  EXPECT_GT(pole_clearance(p.poles, 0.0, t_max), 1e-3);
  for (const auto& pole : p.poles)
    if (!pole.spurious && std::abs(pole.t.imag()) < 1e-8) EXPECT_LT(pole.t.real(), 0.0);
}

TEST(LaplaceSum, ZeroTransform) {
  std::vector<CVector<double>> a{{0.7}, {0.0}, {0.0}, {0.0}, {0.0}, {0.0}};
  const auto r = borel_pade_laplace<double>(a, cd(0.1), 2, 2);
  EXPECT_EQ(r.value[0], cd(0.7));
}

TEST(LaplaceSum, PoleOnRayIsObstruction) {
  try {
    (void)borel_pade_laplace<double>(factorial_series(10, 1.0), cd(0.1), 1, 2);
    FAIL();
  } catch (const PoleObstructionError& e) {
    EXPECT_EQ(e.code(), ErrorCode::pole_obstruction);
    EXPECT_NEAR(std::abs(e.pole() - 1.0), 0.0, 1e-5);
  }
}

TEST(LaplaceSum, EulerSeriesAgainstStieltjes) {
  const auto r = borel_pade_laplace<double>(factorial_series(30, -1.0), cd(0.1), 14, 15);
  EXPECT_NEAR(r.value[0].real(), oracle::stieltjes(0.1), 1e-8);
  EXPECT_GT(r.pole_clearance, 1e-3);
}

TEST(LaplaceSum, ClearanceShrinksTowardPoleDirection) {
  const auto d = borel_transform(factorial_series(30, -1.0));
  const auto p = pade_continue(d, 14, 15);
  double prev = std::numeric_limits<double>::infinity();
  for (int q = 0; q <= 8; ++q) {
    const double theta = std::numbers::pi * (0.5 + 0.5 * q / 8);
    const double c = pole_clearance(p.poles, theta, 50.0);
    EXPECT_LE(c, prev + 1e-12);
    prev = c;
  }
}

TEST(LaplaceSum, NonPositiveDirectionIsRejected) {
  EXPECT_THROW(borel_pade_laplace<double>(factorial_series(10, -1.0), cd(-0.1), 4, 5), Error);
}

TEST(LaplaceSum, RiccatiConvergesInI) {
  const auto sol = solve_eps(builtin_riccati<double>(), 30, 60);
  const auto a = evaluate_coefficients(sol, cd(0.05));
  const double ref = shifted_reference(0.1, 0.05);
  double prev = 1.0;
  for (int I : {10, 20, 30}) {
    std::vector<CVector<double>> ai(a.begin(), a.begin() + I + 1);
    const int L = (I - 1) / 2;
    const auto r = borel_pade_laplace<double>(ai, cd(0.1), L, I - 1 - L);
    const double err = std::abs(r.value[0] - ref);
    EXPECT_LE(err, 3 * std::max(prev, 1e-15));
    prev = err;
  }
  EXPECT_LE(prev, 1e-6);
}

TEST(OptimalTruncation, EulerIndex) {
  const auto r = optimal_truncation_sum<double>(factorial_series(30, 1.0), cd(0.1));
  EXPECT_GE(r.I_star, 9);
  EXPECT_LE(r.I_star, 11);
  std::vector<CVector<double>> z{{0.4}, {0.0}, {0.0}, {0.0}, {0.0}};
  EXPECT_EQ(optimal_truncation_sum<double>(z, cd(0.1)).value[0], cd(0.4));
  int prev = 0;
  for (double e : {0.3, 0.2, 0.1, 0.05}) {
    const int s = optimal_truncation_sum<double>(factorial_series(40, 1.0), cd(e)).I_star;
    EXPECT_GE(s, prev);
    prev = s;
  }
}
