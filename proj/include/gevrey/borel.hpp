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
#include <boost/math/quadrature/gauss.hpp>

#include "gevrey/error.hpp"
#include "gevrey/linalg.hpp"
#include "gevrey/numeric.hpp"

namespace gevrey {

/// b_i = a_{i+1}(z)/i!, i = 0..I-1; the sum is a_0 + int_0^inf e^{-t/eps} B(t) dt.
template <class Real>
struct BorelData {
  std::complex<double> z;
  std::vector<CVector<Real>> b;
  CVector<Real> a0;
  int nu() const { return static_cast<int>(a0.size()); }
};

template <class Real>
BorelData<Real> borel_transform(const std::vector<CVector<Real>>& a, std::complex<double> z = {}) {
  const int I = static_cast<int>(a.size()) - 1;
  if (I < 4) throw Error(ErrorCode::insufficient_data, "Borel transform needs a_0 .. a_I with I >= 4");
  BorelData<Real> d;
  d.z = z;
  d.a0 = a.front();
  Real fact(1);
  for (int i = 0; i < I; ++i) {
    if (i > 0) fact *= Real(i);
    CVector<Real> bi = a[static_cast<std::size_t>(i + 1)];
    for (auto& c : bi) {
      c /= fact;
      if (!is_finite(c)) throw Error(ErrorCode::numerical, "non-finite Borel coefficient");
    }
    d.b.push_back(std::move(bi));
  }
  return d;
}

struct PadePole {
  std::complex<double> t;
  bool spurious = false;  // Froissart doublet: a numerator zero sits on top of it
  double residue = 0.0;
};

/// Rational approximant P(s)/Q(s) in s = t/tau, Q(0) = 1.
template <class Real>
struct PadeApprox {
  int L = 0;
  int M = 0;
  int M_requested = 0;
  bool fallback = false;
  Real tau = Real(1);
  CVector<Real> p;
  CVector<Real> q;
  std::vector<PadePole> poles;
  std::vector<std::complex<double>> zeros;

  Complex<Real> operator()(const Complex<Real>& t) const {
    const Complex<Real> s = t / tau;
    Complex<Real> num(0), den(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) num = num * s + *it;
    for (auto it = q.rbegin(); it != q.rend(); ++it) den = den * s + *it;
    return num / den;
  }
};

namespace detail {

// Roots of c_0 + c_1 s + ... + c_d s^d via the companion matrix in double.
template <class Real>
std::vector<std::complex<double>> poly_roots(const CVector<Real>& c) {
  std::vector<std::complex<double>> cd;
  for (const auto& x : c) cd.push_back(to_double(x));
  while (cd.size() > 1 && cd.back() == std::complex<double>(0)) cd.pop_back();
  const int d = static_cast<int>(cd.size()) - 1;
  if (d < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j < d; ++j) comp(0, j) = -cd[d - 1 - j] / cd[d];
  for (int j = 1; j < d; ++j) comp(j, j - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<std::complex<double>> r(es.eigenvalues().data(), es.eigenvalues().data() + d);
  std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return r;
}

template <class Real>
Real estimate_radius(const std::vector<Complex<Real>>& c) {
  const int n = static_cast<int>(c.size());
  double acc = 0.0;
  int cnt = 0;
  for (int i = std::max(1, n / 2); i < n; ++i) {
    const double m = to_double(magnitude(c[static_cast<std::size_t>(i)]));
    if (m > 0.0) {
      acc += -std::log(m) / i;
      ++cnt;
    }
  }
  if (cnt == 0) return Real(1);
  const double tau = std::exp(acc / cnt);
  return Real(std::isfinite(tau) && tau > 0 ? tau : 1.0);
}

}  // namespace detail

/// [L/M] Pade approximant of one component of B(t). The Toeplitz system for
/// the denominator is solved by pivoted LU in t/tau with tau the estimated
/// radius of convergence; near-singular systems fall back to smaller M.
template <class Real>
PadeApprox<Real> pade_continue(const BorelData<Real>& data, int L, int M, int component = 0,
                               double degeneracy = -1.0) {
  const int I = static_cast<int>(data.b.size());
  if (L < 0 || M < 0 || L + M + 1 > I)
    throw Error(ErrorCode::domain, "Pade orders need L + M + 1 <= I");
  if (component < 0 || component >= data.nu()) throw Error(ErrorCode::domain, "component out of range");
  const double threshold = degeneracy > 0 ? degeneracy : 1e3 * to_double(machine_epsilon<Real>());
  std::vector<Complex<Real>> raw;
  for (const auto& v : data.b) raw.push_back(v[static_cast<std::size_t>(component)]);
  PadeApprox<Real> out;
  out.L = L;
  out.M_requested = M;
  out.tau = detail::estimate_radius(raw);
  std::vector<Complex<Real>> c(raw.size());
  {
    Real tp(1);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      c[i] = raw[i] * tp;
      tp *= out.tau;
    }
  }
  auto cc = [&](int k) { return k < 0 ? Complex<Real>(0) : c[static_cast<std::size_t>(k)]; };

  bool solved = false;
  for (int m = M; m >= 0 && !solved; --m) {
    CVector<Real> q(static_cast<std::size_t>(m + 1), Complex<Real>(0));
    q[0] = Complex<Real>(1);
    if (m > 0) {
      Matrix<Real> T(m, m);
      CVector<Real> rhs(static_cast<std::size_t>(m));
      for (int r = 0; r < m; ++r) {
        const int k = L + 1 + r;
        for (int j = 1; j <= m; ++j) T(r, j - 1) = cc(k - j);
        rhs[r] = -cc(k);
      }
      LuDecomposition<Real> lu(T);
      if (lu.singular() || to_double(lu.pivot_ratio()) < threshold) continue;
      const auto sol = lu.solve(rhs);
      for (int j = 1; j <= m; ++j) q[j] = sol[j - 1];
    } else if (M > 0) {
      // Polynomial fallback is only acceptable when the data are polynomial.
      Real tail(0);
      Real head(0);
      for (int k = 0; k < I; ++k) {
        const Real v = magnitude(c[k]);
        if (k > L) tail = std::max(tail, v);
        else head = std::max(head, v);
      }
      if (tail > Real(threshold) * (head + Real(1e-300)))
        throw Error(ErrorCode::continuation_failed,
                    "every Pade denominator order is degenerate for this data");
    }
    CVector<Real> p(static_cast<std::size_t>(L + 1), Complex<Real>(0));
    for (int k = 0; k <= L; ++k)
      for (int j = 0; j <= std::min(k, m); ++j) p[k] += q[j] * cc(k - j);
    out.M = m;
    out.fallback = m < M;
    out.p = std::move(p);
    out.q = std::move(q);
    solved = true;
  }
  for (const auto& x : out.q)
    if (!is_finite(x)) throw Error(ErrorCode::continuation_failed, "non-finite Pade denominator");

  const double tau = to_double(out.tau);
  for (auto& z : detail::poly_roots(out.p)) out.zeros.push_back(z * tau);
  // Derivative of Q for residues.
  CVector<Real> dq;
  for (std::size_t j = 1; j < out.q.size(); ++j) dq.push_back(Real(j) * out.q[j]);
  double pscale = 0.0;
  for (const auto& x : out.p) pscale = std::max(pscale, to_double(magnitude(x)));
  for (const auto& s : detail::poly_roots(out.q)) {
    PadePole pole;
    pole.t = s * tau;
    std::complex<double> num = 0, der = 0;
    for (auto it = out.p.rbegin(); it != out.p.rend(); ++it) num = num * s + to_double(*it);
    for (auto it = dq.rbegin(); it != dq.rend(); ++it) der = der * s + to_double(*it);
    pole.residue = std::abs(der) > 0 ? std::abs(num / der) * tau : std::numeric_limits<double>::infinity();
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& z : out.zeros) nearest = std::min(nearest, std::abs(z - pole.t));
    pole.spurious = nearest < 1e-4 * std::max(1.0, std::abs(pole.t)) ||
                    pole.residue < 1e-10 * std::max(pscale, 1e-300) * tau;
    out.poles.push_back(pole);
  }
  return out;
}

/// Distance from a point to the segment {s e^{i theta} : 0 <= s <= t_max}.
inline double distance_to_ray_segment(std::complex<double> t, double theta, double t_max) {
  const std::complex<double> u = std::polar(1.0, theta);
  const double s = std::clamp((t * std::conj(u)).real(), 0.0, t_max);
  return std::abs(t - s * u);
}

/// Smallest distance of the genuine (non-spurious) poles to the integration segment.
inline double pole_clearance(const std::vector<PadePole>& poles, double theta, double t_max,
                             bool include_spurious = false) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : poles)
    if (include_spurious || !p.spurious) d = std::min(d, distance_to_ray_segment(p.t, theta, t_max));
  return d;
}

struct LaplaceOptions {
  double theta = 0.0;
  double eta = 1e-16;
  double safety = 1.5;
  double delta = 1e-3;  // minimal pole clearance
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int initial_panels = 8;
  int max_panels = 1 << 14;
};

template <class Real>
struct SummationReport {
  CVector<Real> value;
  std::string method;
  double quadrature_error_estimate = 0.0;
  double tail_bound = 0.0;
  double pole_clearance = std::numeric_limits<double>::infinity();
  double t_max = 0.0;
  int panels = 0;
  int L = 0;
  int M = 0;
  bool fallback = false;
  int spurious_poles = 0;
  int I_star = 0;  // optimal truncation only
  std::optional<double> reference_error;
};

/// value = a_0 + e^{i theta} int_0^{t_max} e^{-s e^{i theta}/eps} P(s e^{i theta}) ds
/// by adaptive Gauss-Legendre panels; the tail beyond t_max is bounded by
/// |eps| e^{-t_max Re(e^{i theta}/eps)} max|P| and added to the error estimate.
template <class Real>
SummationReport<Real> laplace_sum(const BorelData<Real>& data, const std::vector<PadeApprox<Real>>& pade,
                                  const Complex<Real>& eps, const LaplaceOptions& opt = {}) {
  if (static_cast<int>(pade.size()) != data.nu())
    throw Error(ErrorCode::domain, "one Pade approximant per component is required");
  const std::complex<double> u = std::polar(1.0, opt.theta);
  const std::complex<double> ed = to_double(eps);
  const double decay = (u / ed).real();
  if (!(decay > 0.0)) throw Error(ErrorCode::domain, "eps must satisfy Re(e^{i theta}/eps) > 0");

  SummationReport<Real> rep;
  rep.method = "borel_pade";
  rep.t_max = std::log(1.0 / opt.eta) * opt.safety / decay;
  rep.L = pade.front().L;
  rep.M = pade.front().M;
  for (const auto& pa : pade) {
    rep.fallback = rep.fallback || pa.fallback;
    for (const auto& pole : pa.poles) rep.spurious_poles += pole.spurious ? 1 : 0;
    const double cl = pole_clearance(pa.poles, opt.theta, rep.t_max);
    rep.pole_clearance = std::min(rep.pole_clearance, cl);
  }
  if (!(rep.pole_clearance > opt.delta)) {
    std::complex<double> worst;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pa : pade)
      for (const auto& pole : pa.poles) {
        const double d = distance_to_ray_segment(pole.t, opt.theta, rep.t_max);
        if (!pole.spurious && d < best) {
          best = d;
          worst = pole.t;
        }
      }
    throw PoleObstructionError("Pade pole at (" + std::to_string(worst.real()) + ", " +
                                   std::to_string(worst.imag()) + ") lies within " +
                                   std::to_string(opt.delta) + " of the integration ray",
                               worst, rep.pole_clearance);
  }

  using Rule = boost::math::quadrature::gauss<Real, 30>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const Complex<Real> dir = complex_cast<Real>(u);
  const Real tmax(rep.t_max);
  const int nu = data.nu();
  double pmax = 0.0;
  auto integrate = [&](int panels) {
    CVector<Real> acc(static_cast<std::size_t>(nu), Complex<Real>(0));
    const Real h = tmax / Real(panels);
    for (int j = 0; j < panels; ++j) {
      const Real mid = h * (Real(j) + Real(0.5));
      const Real half = h / Real(2);
      for (std::size_t q = 0; q < x.size(); ++q) {
        for (int sgn = -1; sgn <= 1; sgn += 2) {
          if (sgn == 1 && x[q] == Real(0)) continue;
          const Real s = mid + Real(sgn) * half * x[q];
          const Complex<Real> t = dir * s;
          using std::exp;
          const Complex<Real> kern = std::exp(-t / eps);
          for (int c = 0; c < nu; ++c) {
            const Complex<Real> pv = pade[static_cast<std::size_t>(c)](t);
            pmax = std::max(pmax, to_double(magnitude(pv)));
            acc[c] += w[q] * half * kern * pv;
          }
        }
      }
    }
    for (auto& v : acc) v *= dir;
    return acc;
  };
  int panels = std::max(1, opt.initial_panels);
  CVector<Real> prev = integrate(panels);
  double change = std::numeric_limits<double>::infinity();
  while (panels < opt.max_panels) {
    panels *= 2;
    const CVector<Real> cur = integrate(panels);
    CVector<Real> d(cur.size());
    for (std::size_t c = 0; c < cur.size(); ++c) d[c] = cur[c] - prev[c];
    change = to_double(euclidean_norm(d));
    const double size = to_double(euclidean_norm(cur));
    prev = cur;
    if (change < opt.abs_tol || change < opt.rel_tol * size) break;
  }
  rep.panels = panels;
  rep.tail_bound = std::abs(ed) * std::exp(-rep.t_max * decay) * pmax;
  rep.quadrature_error_estimate = change + rep.tail_bound;
  rep.value = data.a0;
  for (int c = 0; c < nu; ++c) rep.value[c] += prev[c];
  return rep;
}

/// Componentwise [L/M] continuation followed by the Laplace integral.
template <class Real>
SummationReport<Real> borel_pade_laplace(const std::vector<CVector<Real>>& a, const Complex<Real>& eps,
                                         int L, int M, const LaplaceOptions& opt = {}) {
  const auto data = borel_transform(a);
  std::vector<PadeApprox<Real>> pade;
  for (int c = 0; c < data.nu(); ++c) pade.push_back(pade_continue(data, L, M, c));
  return laplace_sum(data, pade, eps, opt);
}

/// Partial sum over i < I*, I* = argmin_{i >= 1} ||a_i|| |eps|^i.
template <class Real>
SummationReport<Real> optimal_truncation_sum(const std::vector<CVector<Real>>& a, const Complex<Real>& eps) {
  const int I = static_cast<int>(a.size()) - 1;
  if (I < 4) throw Error(ErrorCode::insufficient_data, "optimal truncation needs a_0 .. a_I with I >= 4");
  const Real ae = magnitude(eps);
  int best = 1;
  Real best_v = std::numeric_limits<Real>::infinity();
  Real ep(1);
  for (int i = 1; i <= I; ++i) {
    ep *= ae;
    const Real v = euclidean_norm(a[static_cast<std::size_t>(i)]) * ep;
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  SummationReport<Real> rep;
  rep.method = "optimal_truncation";
  rep.I_star = best;
  rep.value.assign(a.front().size(), Complex<Real>(0));
  Complex<Real> e(1);
  for (int i = 0; i < best; ++i) {
    for (std::size_t c = 0; c < rep.value.size(); ++c) rep.value[c] += a[static_cast<std::size_t>(i)][c] * e;
    e *= eps;
  }
  rep.quadrature_error_estimate = to_double(best_v);
  return rep;
}

}  // namespace gevrey
