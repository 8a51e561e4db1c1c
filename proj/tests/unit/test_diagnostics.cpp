#include <gtest/gtest.h>

#include <random>

#include <gevrey/gevrey_diagnostics.hpp>
#include <gevrey/riccati_reference.hpp>
#include <gevrey/solver_eps.hpp>

#include "oracles.hpp"

using namespace gevrey;
using cd = std::complex<double>;

namespace {

Series<double> monomial(int n) {
  std::vector<cd> c(static_cast<std::size_t>(n + 1), 0.0);
  c[n] = 1.0;
  return Series<double>(Var::z, c, true);
}

double lfact(int i) { return std::lgamma(i + 1.0); }

}  // namespace

TEST(NagumoNorm, MonomialClosedForm) {
  for (double kappa : {0.5, 1.0, 2.0})
    for (int n = 0; n <= 30; ++n)
      for (int k = 0; k <= 30; ++k) {
        const double want = nagumo_monomial(n, k, kappa);
        const auto got = nagumo_norm(monomial(n), k, kappa);
        EXPECT_NEAR(got.value, want, 1e-10 * want) << "n=" << n << " k=" << k;
      }
}

TEST(NagumoNorm, MonomialAgainstGridScan) {
  for (int n : {1, 4, 9})
    for (int k : {1, 3, 7}) {
      std::vector<double> m(static_cast<std::size_t>(n + 1), 0.0);
      m[n] = 1.0;
      const double grid = oracle::nagumo_grid(m, k, 1.5);
      EXPECT_NEAR(nagumo_monomial(n, k, 1.5), grid, 1e-8 * grid);
    }
}

TEST(NagumoNorm, SpecialCases) {
  const Series<double> f(Var::z, {1.0, cd(0, -2), 0.5}, true);
  EXPECT_NEAR(nagumo_norm(f, 0, 2.0).value, 1 + 4 + 2, 1e-14);
  const Series<double> c(Var::z, {cd(3, 4)}, true);
  EXPECT_NEAR(nagumo_norm(c, 3, 1.5).value, 5 * std::pow(1.5, 3), 1e-12);
}

TEST(NagumoNorm, MultimodalMatchesGrid) {
  // 1 + z^12 has two competing maxima of (kappa - r)^k M(r).
  const std::vector<double> m = {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 40};
  for (int k : {1, 2, 5}) {
    const double grid = oracle::nagumo_grid(m, k, 1.0);
    EXPECT_NEAR(nagumo_norm_majorant(m, k, 1.0).value, grid, 1e-8 * grid);
  }
}

TEST(NagumoProperties, TrivialAndMonomialCases) {
  const Series<double> one = Series<double>::constant(Var::z, 1.0);
  EXPECT_TRUE(nagumo_property_suite(one, one, 0, 0, 1.0).all());
  for (int n = 0; n <= 20; ++n)
    for (int k = 1; k <= 20; ++k) {
      const double kappa = 1.3;
      EXPECT_LE(nagumo_monomial(n, k, kappa), kappa * nagumo_monomial(n, k - 1, kappa) * (1 + 1e-12));
      if (n >= 1)
        EXPECT_LE(n * nagumo_monomial(n - 1, k + 1, kappa),
                  std::numbers::e * (k + 1) * nagumo_monomial(n, k, kappa) * (1 + 1e-12));
    }
}

TEST(NagumoProperties, RandomPolynomialPairs) {
  std::mt19937 rng(1234);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> deg(0, 25), idx(0, 6);
  const double kappas[] = {0.5, 1.0, 2.0};
  for (int trial = 0; trial < 500; ++trial) {
    auto rand_poly = [&] {
      std::vector<cd> c(static_cast<std::size_t>(deg(rng) + 1));
      for (auto& x : c) x = {nd(rng), nd(rng)};
      return Series<double>(Var::z, c, true);
    };
    const auto f = rand_poly(), g = rand_poly();
    const auto r = nagumo_property_suite(f, g, idx(rng), idx(rng), kappas[trial % 3]);
    EXPECT_TRUE(r.sum_ok) << trial;
    EXPECT_TRUE(r.product_ok) << trial;
    EXPECT_TRUE(r.derivative_ok) << trial;
    EXPECT_TRUE(r.shift_ok) << trial;
  }
}

TEST(SupNormDisc, Examples) {
  EXPECT_NEAR(sup_norm_disc(monomial(1), 0.3), 0.3, 1e-16);
  std::vector<cd> c;
  for (int n = 0; n <= 60; ++n) c.push_back(std::pow(0.5, n));
  EXPECT_NEAR(sup_norm_disc(Series<double>(Var::z, c, true), 1.0), 2.0, 1e-15);
  EXPECT_EQ(sup_norm_disc(Series<double>(Var::z, {0.0}, true), 0.7), 0.0);
}

TEST(GevreyFit, RecoversSyntheticParameters) {
  std::vector<double> a, b;
  for (int i = 0; i <= 20; ++i) {
    a.push_back(3.0 * std::exp(lfact(i)) * std::pow(0.5, i));
    b.push_back(std::exp(lfact(i)));
  }
  const auto fa = gevrey_fit(a);
  EXPECT_NEAR(fa.mu, 0.5, 1e-10 * 0.5);
  EXPECT_NEAR(fa.C, 3.0, 1e-10 * 3.0);
  EXPECT_NEAR(fa.r2, 1.0, 1e-12);
  EXPECT_TRUE(fa.bound_holds);
  const auto fb = gevrey_fit(b);
  EXPECT_NEAR(fb.mu, 1.0, 1e-10);
  EXPECT_NEAR(fb.C, 1.0, 1e-10);
}

TEST(GevreyFit, Rejections) {
  EXPECT_THROW(gevrey_fit(std::vector<double>(8, 1.0)), Error);
  std::vector<double> bad(20, 1.0);
  bad[7] = 0.0;
  try {
    (void)gevrey_fit(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::domain);
  }
}

TEST(GevreyFit, InflationCoversEveryIndex) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::vector<double> n;
  for (int i = 0; i <= 25; ++i) n.push_back(u(rng) * std::exp(lfact(i)) * std::pow(0.3, i));
  const auto f = gevrey_fit(n);
  for (int i = 0; i <= 25; ++i) EXPECT_LE(n[i], f.C * std::exp(lfact(i)) * std::pow(f.mu, i) * (1 + 1e-12));
}

TEST(GevreyFit, RiccatiSupNorms) {
  const auto sol = solve_eps(builtin_riccati<double>(), 30, 60);
  std::vector<double> norms;
  for (const auto& a : sol.a) norms.push_back(sup_norm_disc(a, 0.05));
  const auto f = gevrey_fit(norms);
  // Plain least squares over 3 <= i <= 30 as the oracle for slope and r2.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = 28;
  for (int i = 3; i <= 30; ++i) {
    const double y = std::log(norms[i]) - lfact(i);
    sx += i;
    sy += y;
    sxx += double(i) * i;
    sxy += i * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  for (int i = 3; i <= 30; ++i) {
    const double y = std::log(norms[i]) - lfact(i);
    ss_res += std::pow(y - icpt - slope * i, 2);
    ss_tot += std::pow(y - sy / n, 2);
  }
  EXPECT_NEAR(f.mu, std::exp(slope), 1e-10);
  EXPECT_NEAR(f.r2, 1 - ss_res / ss_tot, 1e-10);
  EXPECT_GT(f.mu, 0.0);
  EXPECT_TRUE(f.bound_holds);
  for (int i = 0; i <= 30; ++i) EXPECT_LE(norms[i], f.C * std::exp(lfact(i)) * std::pow(f.mu, i) * (1 + 1e-12));
}

TEST(RemainderProfile, ZeroTermsGiveReference) {
  std::vector<CVector<double>> a(12, CVector<double>{0.0});
  const auto rp = remainder_profile<double>(a, {0.25}, cd(0.1));
  EXPECT_EQ(rp.abs_r[0], 0.25);
}

TEST(RemainderProfile, EulerSeriesHasInteriorMinimum) {
  // sum i! (-eps)^i against its Borel sum: minimum near I = 1/eps.
  std::vector<CVector<double>> a;
  double f = 1;
  for (int i = 0; i <= 40; ++i) {
    if (i) f *= i;
    a.push_back({(i % 2 ? -f : f)});
  }
  const auto rp = remainder_profile<double>(a, {oracle::stieltjes(0.1)}, cd(0.1));
  EXPECT_TRUE(rp.finite);
  EXPECT_GE(rp.I_star, 8);
  EXPECT_LE(rp.I_star, 13);
}
