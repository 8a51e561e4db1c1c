#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gevrey/convolution.hpp"
#include "gevrey/error.hpp"
#include "gevrey/linalg.hpp"
#include "gevrey/problem.hpp"

namespace gevrey {

/// S(theta, gamma; E) = {eps : |arg eps - theta| < gamma/2, 0 < |eps| < E}.
struct SectorSpec {
  double theta = 0.0;
  double gamma = std::numbers::pi;
  double E = 0.2;

  void validate() const {
    if (!(gamma > 0.0) || gamma > 2.0 * std::numbers::pi)
      throw Error(ErrorCode::domain, "opening angle must lie in (0, 2 pi]");
    if (!(E > 0.0)) throw Error(ErrorCode::domain, "sector radius must be positive");
  }
};

/// Eigenvalues of a dense complex matrix, sorted by (real, imag) for
/// reproducible output.
template <class Real>
std::vector<std::complex<double>> spectrum(const Matrix<Real>& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::domain, "spectrum of a non-square matrix");
  if (a.rows() == 0) return {};
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(a), false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::numerical, "eigenvalue iteration failed");
  std::vector<std::complex<double>> ev(es.eigenvalues().data(),
                                       es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return ev;
}

/// Distance between the rays at angles a and b, in [0, pi].
inline double wrapped_angle_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
  return d > std::numbers::pi ? 2.0 * std::numbers::pi - d : d;
}

namespace detail {
inline void require_nonzero_spectrum(const std::vector<std::complex<double>>& ev) {
  double scale = 1.0;
  for (const auto& l : ev) scale = std::max(scale, std::abs(l));
  for (const auto& l : ev)
    if (std::abs(l) <= 1e-14 * scale)
      throw Error(ErrorCode::degenerate_spectrum, "A_{0,1}(0) has a zero eigenvalue");
}
}  // namespace detail

struct SiegelResult {
  bool ok = false;
  std::vector<double> distances;  // wrapped |arg lambda_j - theta|
  std::vector<double> margins;    // distance - gamma/2
};

/// |arg lambda_j - theta| > gamma/2 for every eigenvalue.
inline SiegelResult check_siegel(const std::vector<std::complex<double>>& ev, double theta, double gamma) {
  detail::require_nonzero_spectrum(ev);
  SiegelResult r;
  r.ok = true;
  for (const auto& l : ev) {
    const double d = wrapped_angle_distance(std::arg(l), theta);
    r.distances.push_back(d);
    r.margins.push_back(d - gamma / 2.0);
    if (!(d > gamma / 2.0)) r.ok = false;
  }
  return r;
}

/// Supremum of the admissible opening at direction theta: 2 min_j d_j.
inline double gamma_max(const std::vector<std::complex<double>>& ev, double theta) {
  detail::require_nonzero_spectrum(ev);
  double d = std::numbers::pi;
  for (const auto& l : ev) d = std::min(d, wrapped_angle_distance(std::arg(l), theta));
  return 2.0 * d;
}

/// Summability in direction theta needs an opening larger than pi.
inline bool summable_direction(const std::vector<std::complex<double>>& ev, double theta) {
  return gamma_max(ev, theta) > std::numbers::pi;
}

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  std::vector<double> args;
  double theta = 0.0;
  double gamma_max = 0.0;
  bool summable = false;
};

template <class Real>
SpectrumReport spectrum_report(const ProblemSpec<Real>& p, double theta) {
  SpectrumReport r;
  r.eigenvalues = spectrum(p.a01(Complex<Real>(0)));
  for (const auto& l : r.eigenvalues) r.args.push_back(std::arg(l));
  r.theta = theta;
  r.gamma_max = gamma_max(r.eigenvalues, theta);
  r.summable = r.gamma_max > std::numbers::pi;
  return r;
}

struct ResolventReport {
  double c = 0.0;
  int samples = 0;  // number of eps points visited
  int k_max = 0;
  std::complex<double> worst_eps;
  int worst_k = 0;
};

/// Sample points on the boundary of S(theta, gamma; E): the outer arc and the
/// two radial edges, `samples` points each.
inline std::vector<std::complex<double>> sector_boundary_grid(const SectorSpec& s, int samples) {
  std::vector<std::complex<double>> g;
  const double lo = s.theta - s.gamma / 2.0;
  const double hi = s.theta + s.gamma / 2.0;
  for (int j = 0; j < samples; ++j) {
    const double phi = samples == 1 ? s.theta : lo + (hi - lo) * j / (samples - 1);
    g.push_back(std::polar(s.E, phi));
  }
  for (int j = 1; j <= samples; ++j) {
    const double r = s.E * j / samples;
    g.push_back(std::polar(r, lo));
    g.push_back(std::polar(r, hi));
  }
  return g;
}

/// Sampled estimate of c = sup ||(eps k I - A_{0,1}(eps))^{-1}|| over the sector
/// and 1 <= k <= k_max. Not a certified bound.
template <class Real>
ResolventReport resolvent_bound(const ProblemSpec<Real>& p, const SectorSpec& sector, int k_max,
                                int samples) {
  sector.validate();
  if (k_max < 1 || samples < 1) throw Error(ErrorCode::domain, "k_max and samples must be >= 1");
  const auto ev = spectrum(p.a01(Complex<Real>(0)));
  if (!check_siegel(ev, sector.theta, sector.gamma).ok)
    throw Error(ErrorCode::sector_too_wide,
                "an eigenvalue ray meets the sector; reduce gamma or rotate theta");
  ResolventReport rep;
  rep.k_max = k_max;
  const auto grid = sector_boundary_grid(sector, samples);
  rep.samples = static_cast<int>(grid.size());
  for (const auto& e : grid) {
    const Complex<Real> eps = complex_cast<Real>(e);
    const Matrix<Real> a = p.a01(eps);
    for (int k = 1; k <= k_max; ++k) {
      Matrix<Real> m = Matrix<Real>::identity(p.nu) * (eps * Real(k)) - a;
      const double smin = smallest_singular_value(m);
      const double norm = smin > 0.0 ? 1.0 / smin : std::numeric_limits<double>::infinity();
      if (norm > 1e12)
        throw Error(ErrorCode::sector_too_wide,
                    "resolvent blows up at eps = (" + std::to_string(e.real()) + ", " +
                        std::to_string(e.imag()) + "), k = " + std::to_string(k) +
                        "; reduce gamma or E");
      if (norm > rep.c) {
        rep.c = norm;
        rep.worst_eps = e;
        rep.worst_k = k;
      }
    }
  }
  return rep;
}

struct RadiiReport {
  double c = 0.0;
  double a = 0.0;      // distance of the spectrum from the sector's rays (0 if no sector)
  double C_bound = 0.0;
  double alpha = 0.0;
  double kappa = 0.0;
  double sigma = 0.0;
  int limiting_n = 0;
  int limiting_m = 0;
};

/// Distance from lambda to the closed cone {r e^{i phi} : |phi - theta| <= gamma/2, r >= 0}.
inline double distance_to_cone(std::complex<double> lambda, double theta, double gamma) {
  const double d = wrapped_angle_distance(std::arg(lambda), theta);
  if (d <= gamma / 2.0) return 0.0;
  const double off = d - gamma / 2.0;
  return off >= std::numbers::pi / 2.0 ? std::abs(lambda) : std::abs(lambda) * std::sin(off);
}

/// Norm bound of a tensor over |eps| <= r: sum_j ||[eps^j] A|| r^j with the
/// Euclidean norm of the entry array (dominates the multilinear operator norm).
template <class Real>
double tensor_norm_bound(const CoeffTensor<Real>& t, double r) {
  double out = 0.0;
  for (int j = 0; j <= t.eps_degree(); ++j) {
    const auto c = t.eps_coeff(j);
    out += to_double(euclidean_norm(c)) * std::pow(r, j);
  }
  return out;
}

/// Majorant radii: the smallest alpha with c alpha_{n,m} <= alpha C_n / rho^{n+m}
/// over the blocks other than (0,1), C_n = A/n^2 (C_0 = A); then
/// kappa = rho sqrt(1 - alpha/(rho - alpha)) and sigma = kappa (rho - alpha A)/rho.
/// alpha_{n,m} is the smaller of the direct coefficient bound and the Cauchy
/// bound C/(rho1^n rho^m).
template <class Real>
RadiiReport radius_estimates(const ProblemSpec<Real>& p, double c,
                             std::optional<double> c_bound = std::nullopt,
                             std::optional<SectorSpec> sector = std::nullopt) {
  if (!(c > 0.0)) throw Error(ErrorCode::domain, "resolvent bound c must be positive");
  const double rho = p.rho;
  const double rho1 = p.rho1;
  RadiiReport r;
  r.c = c;
  if (c_bound) {
    r.C_bound = *c_bound;
  } else {
    for (const auto& t : p.tensors)
      r.C_bound += tensor_norm_bound(t, rho) * std::pow(rho1, t.n) * std::pow(rho, t.m);
  }
  if (sector) {
    const auto ev = spectrum(p.a01(Complex<Real>(0)));
    double a = std::numeric_limits<double>::infinity();
    for (const auto& l : ev) a = std::min(a, distance_to_cone(l, sector->theta, sector->gamma));
    r.a = a;
  }
  const double A = kConvTamingA;
  double alpha = 0.0;
  for (const auto& t : p.tensors) {
    if (t.n == 0 && t.m == 1) continue;
    if (t.is_zero()) continue;
    const double direct = tensor_norm_bound(t, rho);
    const double cauchy = r.C_bound / (std::pow(rho1, t.n) * std::pow(rho, t.m));
    const double alpha_nm = std::min(direct, cauchy);
    const double cn = t.n == 0 ? A : A / (static_cast<double>(t.n) * t.n);
    const double need = c * alpha_nm * std::pow(rho, t.n + t.m) / cn;
    if (need > alpha) {
      alpha = need;
      r.limiting_n = t.n;
      r.limiting_m = t.m;
    }
  }
  r.alpha = alpha;
  if (!(alpha < rho / 2.0))
    throw RadiiInfeasibleError("majorant scale alpha = " + std::to_string(alpha) +
                                   " is not below rho/2 = " + std::to_string(rho / 2.0) +
                                   "; limiting block (" + std::to_string(r.limiting_n) + "," +
                                   std::to_string(r.limiting_m) + "); shrink rho or rescale z",
                               r.limiting_n, r.limiting_m, alpha);
  r.kappa = rho * std::sqrt(1.0 - alpha / (rho - alpha));
  r.sigma = r.kappa * (rho - alpha * A) / rho;
  return r;
}

}  // namespace gevrey
