// Solve the normalized Riccati problem three ways at (eps, z) = (0.1, 0.05)
// and compare with the closed-form Bessel reference.

#include <cstdio>

#include <gevrey/gevrey.hpp>

int main() {
  using namespace gevrey;
  using cd = std::complex<double>;
  const auto p = builtin_riccati<double>();
  const double eps = 0.1, z = 0.05;

  const auto verdict = spectrum_report(p, 0.0);
  std::printf("gamma_max = %.6f, summable at theta = 0: %s\n", verdict.gamma_max, verdict.summable ? "yes" : "no");

  // Convergent z-series at fixed eps.
  const auto zs = solve_coeffs_z(p, cd(eps), 60);
  const double direct = evaluate_f(zs, cd(z)).value[0].real();

  // Divergent eps-series, resummed.
  const auto es = solve_eps(p, 30, 60);
  const auto a = evaluate_coefficients(es, cd(z));
  const auto borel = borel_pade_laplace<double>(a, cd(eps), 14, 15);
  const auto trunc = optimal_truncation_sum<double>(a, cd(eps));

  const double ref = shifted_reference(eps, z);
  std::printf("reference           %.17f\n", ref);
  std::printf("z-series (K=60)     %.17f  error %.2e\n", direct, std::abs(direct - ref));
  std::printf("Borel-Pade-Laplace  %.17f  error %.2e\n", borel.value[0].real(), std::abs(borel.value[0].real() - ref));
  std::printf("optimal truncation  %.17f  error %.2e (I* = %d)\n", trunc.value[0].real(),
              std::abs(trunc.value[0].real() - ref), trunc.I_star);
  return 0;
}
