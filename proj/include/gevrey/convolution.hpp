#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "gevrey/error.hpp"
#include "gevrey/numeric.hpp"

namespace gevrey {

/// A sequence of nu-vectors whose first element carries index `offset`.
/// Offset-1 sequences have no index-0 element.
template <class Real>
struct VecSequence {
  int offset = 0;
  std::vector<CVector<Real>> items;

  int nu() const { return items.empty() ? 0 : static_cast<int>(items.front().size()); }
  int last_index() const { return offset + static_cast<int>(items.size()) - 1; }

  /// Element with index l, or nullptr when l lies outside the stored range.
  const CVector<Real>* at(int l) const {
    const int j = l - offset;
    if (j < 0 || j >= static_cast<int>(items.size())) return nullptr;
    return &items[static_cast<std::size_t>(j)];
  }
};

namespace detail {

// Sum over compositions l_1 + ... + l_m = k with every part >= min_part of the
// componentwise products seqs[0][l_1] * ... * seqs[m-1][l_m].
template <class Real>
CVector<Real> hadamard_convolution(std::span<const VecSequence<Real>> seqs, int k, int min_part) {
  const int m = static_cast<int>(seqs.size());
  if (m < 1) throw Error(ErrorCode::domain, "convolution needs at least one sequence");
  const int nu = seqs.front().nu();
  for (const auto& s : seqs)
    if (s.nu() != nu) throw Error(ErrorCode::domain, "convolution operands differ in dimension");
  const CVector<Real> zero(static_cast<std::size_t>(nu), Complex<Real>(0));
  if (k < m * min_part) return zero;

  // partial[t] = contribution of the last j slots with total index t.
  std::vector<CVector<Real>> partial(static_cast<std::size_t>(k + 1), zero);
  for (int t = min_part; t <= k; ++t)
    if (const auto* v = seqs[m - 1].at(t)) partial[t] = *v;
  for (int slot = m - 2; slot >= 0; --slot) {
    const int rest = (m - 1 - slot) * min_part;  // smallest total of the slots to the right
    std::vector<CVector<Real>> next(static_cast<std::size_t>(k + 1), zero);
    const int tlo = slot == 0 ? k : min_part + rest;
    for (int t = tlo; t <= k; ++t) {
      for (int l = min_part; l <= t - rest; ++l) {
        const auto* v = seqs[slot].at(l);
        if (!v) continue;
        const auto& w = partial[t - l];
        for (int i = 0; i < nu; ++i) next[t][i] += (*v)[i] * w[i];
      }
    }
    partial.swap(next);
  }
  return partial[k];
}

}  // namespace detail

/// Component k of the m-fold convolution with offset-1 convention (all parts >= 1).
template <class Real>
CVector<Real> conv_offset1(std::span<const VecSequence<Real>> seqs, int k) {
  if (k < 1) throw Error(ErrorCode::domain, "offset-1 convolution index must be >= 1");
  return detail::hadamard_convolution(seqs, k, 1);
}

/// Component k of the m-fold convolution with offset-0 convention.
template <class Real>
CVector<Real> conv_offset0(std::span<const VecSequence<Real>> seqs, int k) {
  if (k < 0) throw Error(ErrorCode::domain, "offset-0 convolution index must be >= 0");
  return detail::hadamard_convolution(seqs, k, 0);
}

inline int tensor_size(int nu, int m) {
  int s = nu;
  for (int j = 0; j < m; ++j) s *= nu;
  return s;
}

/// out^i = sum A^{i,i_1..i_m} v_1^{i_1} ... v_m^{i_m}, with A dense row-major
/// over (i, i_1, ..., i_m).
template <class Real>
CVector<Real> multilinear_apply(const CVector<Real>& a, int nu, std::span<const CVector<Real>> v) {
  const int m = static_cast<int>(v.size());
  if (static_cast<int>(a.size()) != tensor_size(nu, m))
    throw Error(ErrorCode::domain, "tensor arity does not match the number of arguments (" +
                                       std::to_string(m) + ")");
  for (const auto& x : v)
    if (static_cast<int>(x.size()) != nu) throw Error(ErrorCode::domain, "argument dimension mismatch");
  // Contract the last slot first.
  std::vector<Complex<Real>> cur(a.begin(), a.end());
  int width = tensor_size(nu, m);
  for (int slot = m - 1; slot >= 0; --slot) {
    width /= nu;
    std::vector<Complex<Real>> next(static_cast<std::size_t>(width), Complex<Real>(0));
    for (int r = 0; r < width; ++r)
      for (int j = 0; j < nu; ++j) next[r] += cur[static_cast<std::size_t>(r * nu + j)] * v[slot][j];
    cur.swap(next);
  }
  return CVector<Real>(cur.begin(), cur.end());
}

/// Coefficient k of A(u, u, ..., u) where u = sum_l u_l x^l and the tensor A
/// has scalar entries. Elements of `seq` are nu-vectors of E, where E is a
/// scalar or a series (any ring with E*scalar, E+E, E*E). seq[l] holds index
/// l; a missing or short sequence contributes zero. Parts are >= min_part.
template <class E, class Scalar>
std::vector<E> multilinear_convolution(const std::vector<Scalar>& a, int nu, int m,
                                       const std::vector<std::vector<E>>& seq, int k,
                                       int min_part, const E& zero) {
  if (static_cast<int>(a.size()) != tensor_size(nu, m))
    throw Error(ErrorCode::domain, "tensor size does not match its arity");
  if (m < 1) throw Error(ErrorCode::domain, "multilinear convolution needs arity >= 1");
  std::vector<E> zero_out(static_cast<std::size_t>(nu), zero);
  if (k < m * min_part) return zero_out;
  auto item = [&](int l) -> const std::vector<E>* {
    if (l < 0 || l >= static_cast<int>(seq.size())) return nullptr;
    return seq[static_cast<std::size_t>(l)].empty() ? nullptr : &seq[static_cast<std::size_t>(l)];
  };

  // Contract the last slot: W_t has shape nu^m over (i, i_1..i_{m-1}).
  int width = tensor_size(nu, m - 1);
  const int rest_last = (m - 1) * min_part;
  std::vector<std::vector<E>> w(static_cast<std::size_t>(k + 1));
  for (int t = min_part; t <= k - rest_last; ++t) {
    const auto* u = item(t);
    if (!u) continue;
    std::vector<E> cur(static_cast<std::size_t>(width), zero);
    bool any = false;
    for (int r = 0; r < width; ++r)
      for (int j = 0; j < nu; ++j) {
        const Scalar c = a[static_cast<std::size_t>(r * nu + j)];
        if (c == Scalar(0)) continue;
        cur[r] = cur[r] + (*u)[j] * c;
        any = true;
      }
    if (any) w[t] = std::move(cur);
  }
  // Remaining slots, right to left; the outermost computes total k only.
  for (int slot = m - 2; slot >= 0; --slot) {
    width /= nu;
    const int rest = (m - 1 - slot) * min_part;
    const int rest_left = slot * min_part;
    std::vector<std::vector<E>> next(static_cast<std::size_t>(k + 1));
    const int tlo = slot == 0 ? k : min_part + rest;
    const int thi = k - rest_left;
    for (int t = tlo; t <= thi; ++t) {
      std::vector<E> cur;
      for (int l = min_part; l <= t - rest; ++l) {
        const auto* u = item(l);
        const auto& prev = w[static_cast<std::size_t>(t - l)];
        if (!u || prev.empty()) continue;
        if (cur.empty()) cur.assign(static_cast<std::size_t>(width), zero);
        for (int r = 0; r < width; ++r)
          for (int j = 0; j < nu; ++j) cur[r] = cur[r] + (*u)[j] * prev[static_cast<std::size_t>(r * nu + j)];
      }
      if (!cur.empty()) next[t] = std::move(cur);
    }
    w.swap(next);
  }
  return w[static_cast<std::size_t>(k)].empty() ? zero_out : w[static_cast<std::size_t>(k)];
}

/// Taming constant of the convolution bound: A = (1 + pi^2/3)^{-1} / 2.
inline constexpr double kConvTamingA = 0.5 / (1.0 + std::numbers::pi * std::numbers::pi / 3.0);

struct ConvBoundReport {
  bool pass = false;
  double max_ratio = 0.0;
  int worst_m = 0;
};

/// Checks sum_{l=0..m} C_l C_{m-l} <= C_m for C_l = A (l!)^lambda / l^2 (l >= 1),
/// C_0 in {A, 0}, for all m <= m_max. Factorials are handled in log space.
inline ConvBoundReport lemma_conv_bound(double lambda, bool c0_is_A, int m_max) {
  if (m_max < 0) throw Error(ErrorCode::domain, "m_max must be nonnegative");
  if (lambda < 0) throw Error(ErrorCode::domain, "lambda must be nonnegative");
  const double log_a = std::log(kConvTamingA);
  // logC[l] = log C_l; -inf marks C_0 = 0.
  std::vector<double> log_c(static_cast<std::size_t>(m_max + 1));
  const double neg_inf = -std::numeric_limits<double>::infinity();
  log_c[0] = c0_is_A ? log_a : neg_inf;
  for (int l = 1; l <= m_max; ++l)
    log_c[l] = log_a + lambda * std::lgamma(l + 1.0) - 2.0 * std::log(static_cast<double>(l));
  ConvBoundReport rep;
  for (int m = 0; m <= m_max; ++m) {
    if (log_c[m] == neg_inf) continue;  // C_0 = 0: nothing to bound
    double sum = 0.0;
    for (int l = 0; l <= m; ++l) {
      const double e = log_c[l] + log_c[m - l] - log_c[m];
      if (e != neg_inf) sum += std::exp(e);
    }
    if (sum > rep.max_ratio) {
      rep.max_ratio = sum;
      rep.worst_m = m;
    }
  }
  rep.pass = rep.max_ratio <= 1.0 + 1e-12;
  return rep;
}

}  // namespace gevrey
