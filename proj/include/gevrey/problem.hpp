#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gevrey/convolution.hpp"
#include "gevrey/error.hpp"
#include "gevrey/linalg.hpp"
#include "gevrey/numeric.hpp"
#include "gevrey/series.hpp"

namespace gevrey {

/// The block A_{n,m}(eps) of F = sum A_{n,m}(eps) z^n f^m: an m-linear map
/// C^nu x ... x C^nu -> C^nu whose nu^{m+1} entries are series in eps,
/// stored row-major over (i, i_1, ..., i_m).
template <class Real>
struct CoeffTensor {
  int n = 0;
  int m = 0;
  std::vector<Series<Real>> entries;

  /// Entries evaluated at a numeric eps.
  CVector<Real> at(const Complex<Real>& eps) const {
    CVector<Real> out(entries.size());
    for (std::size_t q = 0; q < entries.size(); ++q) out[q] = evaluate(entries[q], eps);
    return out;
  }

  /// Coefficient of eps^j of every entry.
  CVector<Real> eps_coeff(int j) const {
    CVector<Real> out(entries.size());
    for (std::size_t q = 0; q < entries.size(); ++q) out[q] = entries[q].coeff(j);
    return out;
  }

  /// Largest eps power stored in any entry.
  int eps_degree() const {
    int d = 0;
    for (const auto& e : entries) d = std::max(d, e.order());
    return d;
  }

  /// Highest eps order through which every entry is known (INT_MAX if all exact).
  int eps_known_order() const {
    int d = INT_MAX;
    for (const auto& e : entries)
      if (!e.exact()) d = std::min(d, e.order());
    return d;
  }

  bool is_zero() const {
    for (const auto& e : entries)
      for (const auto& c : e.coeffs())
        if (c != Complex<Real>(0)) return false;
    return true;
  }
};

template <class Real>
struct ProblemSpec {
  int nu = 1;
  std::vector<CoeffTensor<Real>> tensors;
  double rho = 1.0;
  double rho1 = 4.0;

  int n_max() const {
    int v = 0;
    for (const auto& t : tensors) v = std::max(v, t.n);
    return v;
  }
  int m_max() const {
    int v = 0;
    for (const auto& t : tensors) v = std::max(v, t.m);
    return v;
  }
  int eps_known_order() const {
    int v = INT_MAX;
    for (const auto& t : tensors) v = std::min(v, t.eps_known_order());
    return v;
  }

  const CoeffTensor<Real>* find(int n, int m) const {
    for (const auto& t : tensors)
      if (t.n == n && t.m == m) return &t;
    return nullptr;
  }

  bool has_constant_block() const {
    const auto* t = find(0, 0);
    return t && !t->is_zero();
  }

  /// A_{0,1}(eps) as a nu x nu matrix (zero when the block is absent).
  Matrix<Real> a01(const Complex<Real>& eps) const {
    Matrix<Real> out(nu, nu);
    if (const auto* t = find(0, 1)) {
      const auto v = t->at(eps);
      for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nu; ++j) out(i, j) = v[static_cast<std::size_t>(i * nu + j)];
    }
    return out;
  }

  /// Structural checks plus invertibility of A_{0,1}(0); throws on failure.
  void validate() const {
    if (nu < 1 || nu > 8) throw Error(ErrorCode::schema, "nu must lie in [1, 8]");
    if (tensors.empty()) throw Error(ErrorCode::schema, "problem has no tensors");
    if (!(rho > 0.0) || !(rho1 > rho))
      throw Error(ErrorCode::schema, "radii must satisfy 0 < rho < rho1");
    for (std::size_t a = 0; a < tensors.size(); ++a) {
      const auto& t = tensors[a];
      if (t.n < 0 || t.m < 0) throw Error(ErrorCode::schema, "tensor powers must be nonnegative");
      if (static_cast<int>(t.entries.size()) != tensor_size(nu, t.m))
        throw Error(ErrorCode::schema, "tensor (" + std::to_string(t.n) + "," + std::to_string(t.m) +
                                           ") must have nu^(m+1) entries");
      for (const auto& e : t.entries) {
        if (e.var() != Var::eps) throw Error(ErrorCode::schema, "tensor entries must be series in eps");
        for (const auto& c : e.coeffs())
          if (!is_finite(c)) throw Error(ErrorCode::schema, "tensor entries must be finite");
      }
      for (std::size_t b = 0; b < a; ++b)
        if (tensors[b].n == t.n && tensors[b].m == t.m)
          throw Error(ErrorCode::schema, "duplicate block (" + std::to_string(t.n) + "," +
                                             std::to_string(t.m) + ")");
    }
    const auto sv = singular_values(a01(Complex<Real>(0)));
    const double smin = sv.back();
    if (!(smin > 1e-10))
      throw SingularError("A_{0,1}(0) is not invertible (smallest singular value " +
                              std::to_string(smin) + ")",
                          sv.front(), smin);
  }

  template <class R2>
  ProblemSpec<R2> cast() const {
    ProblemSpec<R2> out;
    out.nu = nu;
    out.rho = rho;
    out.rho1 = rho1;
    for (const auto& t : tensors) {
      CoeffTensor<R2> u{t.n, t.m, {}};
      for (const auto& e : t.entries) {
        std::vector<Complex<R2>> c;
        for (const auto& x : e.coeffs()) c.push_back(complex_cast<R2>(x));
        u.entries.emplace_back(e.var(), std::move(c), e.exact());
      }
      out.tensors.push_back(std::move(u));
    }
    return out;
  }
};

/// F(eps, z, f) at numeric arguments.
template <class Real>
CVector<Real> evaluate_rhs(const ProblemSpec<Real>& p, const Complex<Real>& eps,
                           const Complex<Real>& z, const CVector<Real>& f) {
  CVector<Real> out(static_cast<std::size_t>(p.nu), Complex<Real>(0));
  for (const auto& t : p.tensors) {
    std::vector<CVector<Real>> args(static_cast<std::size_t>(t.m), f);
    const auto v = multilinear_apply<Real>(t.at(eps), p.nu, args);
    Complex<Real> zn(1);
    for (int j = 0; j < t.n; ++j) zn *= z;
    for (int i = 0; i < p.nu; ++i) out[i] += zn * v[i];
  }
  return out;
}

/// Jacobian of the z^0 part at eps=0, f=s0: d/df sum_m A_{0,m}(0) f^m.
template <class Real>
Matrix<Real> jacobian_at(const ProblemSpec<Real>& p, const CVector<Real>& s0) {
  const int nu = p.nu;
  Matrix<Real> jac(nu, nu);
  for (const auto& t : p.tensors) {
    if (t.n != 0 || t.m == 0) continue;
    const auto a = t.at(Complex<Real>(0));
    for (int slot = 0; slot < t.m; ++slot) {
      for (int col = 0; col < nu; ++col) {
        std::vector<CVector<Real>> args(static_cast<std::size_t>(t.m), s0);
        args[slot] = CVector<Real>(static_cast<std::size_t>(nu), Complex<Real>(0));
        args[slot][col] = Complex<Real>(1);
        const auto v = multilinear_apply<Real>(a, nu, args);
        for (int r = 0; r < nu; ++r) jac(r, col) += v[r];
      }
    }
  }
  return jac;
}

namespace detail {

// sum over (i_1..i_m) of entry(i, i_1..i_m) * s_{i_1} * ... * s_{i_m}, with
// series-valued entries and arguments.
template <class Real>
std::vector<Series<Real>> apply_series_tensor(const CoeffTensor<Real>& t, int nu,
                                              const std::vector<Series<Real>>& s) {
  std::vector<Series<Real>> out(static_cast<std::size_t>(nu), Series<Real>::constant(Var::eps, Complex<Real>(0)));
  const int width = tensor_size(nu, t.m) / nu;
  for (int i = 0; i < nu; ++i) {
    for (int r = 0; r < width; ++r) {
      Series<Real> term = t.entries[static_cast<std::size_t>(i * width + r)];
      int rem = r;
      for (int slot = t.m - 1; slot >= 0; --slot) {
        term = term * s[static_cast<std::size_t>(rem % nu)];
        rem /= nu;
      }
      out[i] = out[i] + term;
    }
  }
  return out;
}

}  // namespace detail

template <class Real>
struct NormalizationShift {
  VecSeries<Real> s;        // f = f~ + s(eps)
  ProblemSpec<Real> shifted;
  bool exact = false;       // s solves the shift equation exactly, not only through K_eps
};

/// Finds s(eps) with sum_m A_{0,m}(eps) s^m = 0 order by order and re-expands
/// F around f = f~ + s(eps). Without `root`, F(0,0,0) must vanish and s(0) = 0;
/// a root s0 of F(0,0,.) may be supplied otherwise.
template <class Real>
NormalizationShift<Real> normalize_shift(const ProblemSpec<Real>& p, int k_eps,
                                         std::optional<CVector<Real>> root = std::nullopt,
                                         double tolerance = 1e-12) {
  const int nu = p.nu;
  const Complex<Real> zero(0);
  CVector<Real> s0 = root ? *root : CVector<Real>(static_cast<std::size_t>(nu), zero);
  if (static_cast<int>(s0.size()) != nu) throw Error(ErrorCode::domain, "root has the wrong dimension");

  // G(eps, s) = sum_m A_{0,m}(eps) s^m with s a vector of eps-series.
  auto g_of = [&](const std::vector<Series<Real>>& s) {
    std::vector<Series<Real>> g(static_cast<std::size_t>(nu), Series<Real>::constant(Var::eps, zero));
    for (const auto& t : p.tensors) {
      if (t.n != 0) continue;
      const auto v = detail::apply_series_tensor(t, nu, s);
      for (int i = 0; i < nu; ++i) g[i] = g[i] + v[i];
    }
    return g;
  };

  std::vector<Series<Real>> s(static_cast<std::size_t>(nu));
  for (int i = 0; i < nu; ++i) s[i] = Series<Real>(Var::eps, {s0[i]}, true);
  {
    const auto g0 = g_of(s);
    double r = 0.0;
    for (const auto& c : g0) r = std::max(r, to_double(magnitude(c.coeff(0))));
    if (r > tolerance) {
      if (root) throw Error(ErrorCode::normalization_impossible, "supplied root does not solve F(0,0,f) = 0");
      throw Error(ErrorCode::normalization_impossible,
                  "F(0,0,0) != 0; supply a root of F(0,0,f) = 0 to normalize");
    }
  }
  const Matrix<Real> jac = checked_inverse(jacobian_at(p, s0), 1e-10, "shift Jacobian");
  for (int j = 1; j <= k_eps; ++j) {
    const auto g = g_of(s);
    CVector<Real> rhs(static_cast<std::size_t>(nu));
    for (int i = 0; i < nu; ++i) rhs[i] = -g[i].coeff(j);
    const auto sj = jac * rhs;
    for (int i = 0; i < nu; ++i) {
      auto c = s[i].coeffs();
      c.resize(static_cast<std::size_t>(j + 1), zero);
      c[j] = sj[i];
      s[i] = Series<Real>(Var::eps, std::move(c), true);
    }
  }

  // Exact when the residual polynomial vanishes at every order, not only <= K_eps.
  bool exact = true;
  for (const auto& c : g_of(s))
    for (const auto& x : c.coeffs())
      if (to_double(magnitude(x)) > tolerance) exact = false;
  bool trivial = true;
  for (const auto& c : s)
    for (const auto& x : c.coeffs())
      if (x != zero) trivial = false;

  NormalizationShift<Real> out;
  {
    std::vector<Series<Real>> comps;
    for (const auto& c : s) comps.push_back(exact ? c : c.truncate(k_eps));
    int order = 0;
    for (const auto& c : comps) order = std::max(order, c.order());
    for (auto& c : comps) {
      auto v = c.coeffs();
      v.resize(static_cast<std::size_t>(order + 1), zero);
      c = Series<Real>(Var::eps, std::move(v), c.exact());
    }
    out.s = VecSeries<Real>::from_components(comps);
  }
  out.exact = exact;
  if (trivial) {
    out.shifted = p;
    return out;
  }

  // Re-expand A(f~ + s, ..., f~ + s): every subset of slots keeps f~.
  std::map<std::pair<int, int>, CoeffTensor<Real>> acc;
  auto block = [&](int n, int m) -> CoeffTensor<Real>& {
    auto it = acc.find({n, m});
    if (it == acc.end()) {
      CoeffTensor<Real> t{n, m, {}};
      t.entries.assign(static_cast<std::size_t>(tensor_size(nu, m)),
                       Series<Real>::constant(Var::eps, zero));
      it = acc.emplace(std::make_pair(n, m), std::move(t)).first;
    }
    return it->second;
  };
  for (const auto& t : p.tensors) {
    const int m = t.m;
    const int width = tensor_size(nu, m) / nu;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      int q = 0;
      for (int b = 0; b < m; ++b) q += (mask >> b) & 1u;
      auto& dst = block(t.n, q);
      const int dst_width = tensor_size(nu, q) / nu;
      for (int i = 0; i < nu; ++i) {
        for (int r = 0; r < width; ++r) {
          Series<Real> term = t.entries[static_cast<std::size_t>(i * width + r)];
          int rem = r;
          int kept = 0;
          int mul = 1;
          for (int slot = m - 1; slot >= 0; --slot) {
            const int idx = rem % nu;
            rem /= nu;
            if ((mask >> slot) & 1u) {
              kept += idx * mul;
              mul *= nu;
            } else {
              term = term * s[static_cast<std::size_t>(idx)];
            }
          }
          auto& e = dst.entries[static_cast<std::size_t>(i * dst_width + kept)];
          e = e + term;
        }
      }
    }
  }

  ProblemSpec<Real> sh;
  sh.nu = nu;
  sh.rho = p.rho;
  sh.rho1 = p.rho1;
  for (auto& [key, t] : acc) {
    if (key.first == 0 && key.second == 0) {
      for (const auto& e : t.entries)
        for (int j = 0; j <= std::min(e.order(), k_eps); ++j)
          if (to_double(magnitude(e[j])) > tolerance)
            throw Error(ErrorCode::numerical, "shifted constant block did not vanish");
      continue;  // zeroed exactly
    }
    if (!exact)
      for (auto& e : t.entries) e = e.truncate(k_eps);
    if (exact) {
      for (auto& e : t.entries) {
        auto c = e.coeffs();
        while (c.size() > 1 && c.back() == zero) c.pop_back();
        e = Series<Real>(Var::eps, std::move(c), true);
      }
    }
    if (t.is_zero()) continue;
    sh.tensors.push_back(std::move(t));
  }
  out.shifted = std::move(sh);
  return out;
}

/// Raw Riccati right-hand side F = -beta(eps)/2 - f + 2 z f^2 (unshifted).
template <class Real>
ProblemSpec<Real> riccati_raw(const std::vector<Complex<Real>>& beta) {
  ProblemSpec<Real> p;
  p.nu = 1;
  std::vector<Complex<Real>> half;
  for (const auto& b : beta) half.push_back(-b / Real(2));
  p.tensors.push_back({0, 0, {Series<Real>(Var::eps, half, true)}});
  p.tensors.push_back({0, 1, {Series<Real>(Var::eps, {Complex<Real>(-1)}, true)}});
  p.tensors.push_back({1, 2, {Series<Real>(Var::eps, {Complex<Real>(2)}, true)}});
  return p;
}

/// Normalized Riccati problem: f = f~ - beta/2 gives
/// F~ = -(1 + 2 beta z) f~ + beta^2 z / 2 + 2 z f~^2.
template <class Real>
ProblemSpec<Real> builtin_riccati(const std::vector<Complex<Real>>& beta = {Complex<Real>(1)}) {
  if (beta.empty() || beta.front() == Complex<Real>(0))
    throw Error(ErrorCode::domain, "beta(0) must be nonzero");
  const auto raw = riccati_raw<Real>(beta);
  const int degree = static_cast<int>(beta.size()) - 1;
  auto shift = normalize_shift<Real>(raw, std::max(degree, 1),
                                     CVector<Real>{-beta.front() / Real(2)});
  if (!shift.exact) throw Error(ErrorCode::numerical, "Riccati shift is not polynomial");
  auto p = std::move(shift.shifted);
  p.rho = 1.0;
  p.rho1 = 4.0;
  std::sort(p.tensors.begin(), p.tensors.end(), [](const auto& a, const auto& b) {
    return std::pair(a.n, a.m) < std::pair(b.n, b.m);
  });
  return p;
}

/// Substitute z = s w: A_{n,m} -> s^n A_{n,m}. The solution in w is f(s w),
/// so a_{i,k} scales by s^k. Used to make the radius estimates feasible.
template <class Real>
ProblemSpec<Real> rescale_z(const ProblemSpec<Real>& p, const Complex<Real>& s) {
  if (s == Complex<Real>(0)) throw Error(ErrorCode::domain, "z scale must be nonzero");
  auto out = p;
  for (auto& t : out.tensors) {
    Complex<Real> w(1);
    for (int n = 0; n < t.n; ++n) w *= s;
    for (auto& e : t.entries) e *= w;
  }
  return out;
}

/// B_{j,m}(z) = sum_n [eps^j] A_{n,m} z^n: the same data grouped by eps power.
template <class Real>
struct BBlock {
  int j = 0;  // eps power
  int m = 0;
  std::vector<Series<Real>> entries;  // exact polynomials in z
};

template <class Real>
std::vector<BBlock<Real>> assemble_B(const ProblemSpec<Real>& p) {
  std::map<std::pair<int, int>, BBlock<Real>> acc;
  const int nmax = p.n_max();
  for (const auto& t : p.tensors) {
    const int jmax = t.eps_degree();
    for (int j = 0; j <= jmax; ++j) {
      const auto c = t.eps_coeff(j);
      bool any = false;
      for (const auto& x : c) any = any || x != Complex<Real>(0);
      if (!any) continue;
      auto it = acc.find({j, t.m});
      if (it == acc.end()) {
        BBlock<Real> b{j, t.m, {}};
        b.entries.assign(c.size(), Series<Real>(Var::z, std::vector<Complex<Real>>(static_cast<std::size_t>(nmax + 1), Complex<Real>(0)), true));
        it = acc.emplace(std::make_pair(j, t.m), std::move(b)).first;
      }
      for (std::size_t q = 0; q < c.size(); ++q) it->second.entries[q][t.n] = c[q];
    }
  }
  std::vector<BBlock<Real>> out;
  for (auto& [key, b] : acc) out.push_back(std::move(b));
  return out;
}

/// Inverse of assemble_B: regroups B_{j,m}(z) into A_{n,m}(eps).
template <class Real>
std::vector<CoeffTensor<Real>> reassemble_A(const std::vector<BBlock<Real>>& blocks) {
  std::map<std::pair<int, int>, std::vector<std::vector<Complex<Real>>>> acc;
  for (const auto& b : blocks) {
    for (int n = 0; n < static_cast<int>(b.entries.front().coeffs().size()); ++n) {
      bool any = false;
      for (const auto& e : b.entries) any = any || e.coeff(n) != Complex<Real>(0);
      if (!any) continue;
      auto& v = acc[{n, b.m}];
      if (v.empty()) v.resize(b.entries.size());
      for (std::size_t q = 0; q < b.entries.size(); ++q) {
        auto& c = v[q];
        if (static_cast<int>(c.size()) <= b.j) c.resize(static_cast<std::size_t>(b.j + 1), Complex<Real>(0));
        c[b.j] = b.entries[q].coeff(n);
      }
    }
  }
  std::vector<CoeffTensor<Real>> out;
  for (auto& [key, v] : acc) {
    CoeffTensor<Real> t{key.first, key.second, {}};
    std::size_t len = 1;
    for (const auto& c : v) len = std::max(len, c.size());
    for (auto& c : v) {
      c.resize(len, Complex<Real>(0));
      t.entries.emplace_back(Var::eps, std::move(c), true);
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace gevrey
