#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <utility>

#include "matsumoto/error.hpp"
#include "matsumoto/scalar.hpp"

namespace matsumoto {

/// Result of expressing a target vector in a list of generators.
template <Backend B>
struct SpanSolve {
  std::size_t rank = 0;                 // rank of the generator list
  std::optional<Vec<B>> coefficients;   // set iff the target is in the span and rank == #gens
};

namespace detail {

// Row-reduces the d x (k+1) augmented system [gens | target] in place and
// returns the pivot column of each pivot row. Exact: fraction-free
// (Bareiss) updates. Float: partial pivoting, pivots below tolerance are
// treated as zero.
template <Backend B>
std::vector<std::size_t> row_reduce(Matrix<B>& a, std::size_t ncols) {
  using S = typename B::Scalar;
  const std::size_t nrows = a.size();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  S prev = 1;
  for (std::size_t c = 0; c < ncols && r < nrows; ++c) {
    std::size_t p = nrows;
    if constexpr (std::is_same_v<B, Exact>) {
      for (std::size_t i = r; i < nrows; ++i)
        if (sgn(a[i][c]) != 0) { p = i; break; }
    } else {
      double best = 0.0;
      for (std::size_t i = r; i < nrows; ++i)
        if (std::abs(a[i][c]) > best) { best = std::abs(a[i][c]); p = i; }
      if (best <= Float::tolerance()) p = nrows;
    }
    if (p == nrows) continue;
    std::swap(a[r], a[p]);
    const std::size_t width = a[r].size();
    for (std::size_t i = r + 1; i < nrows; ++i) {
      if constexpr (std::is_same_v<B, Exact>) {
        for (std::size_t j = c + 1; j < width; ++j)
          a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      } else {
        const double f = a[i][c] / a[r][c];
        for (std::size_t j = c + 1; j < width; ++j) a[i][j] -= f * a[r][j];
      }
      a[i][c] = 0;
    }
    if constexpr (std::is_same_v<B, Exact>) prev = a[r][c];
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

/// Solves sum_j c_j gens[j] = target. Coefficients are returned only when
/// the generators are independent and the system is consistent (float:
/// residual within tolerance).
template <Backend B>
SpanSolve<B> solve_in_span(std::span<const Vec<B>> gens, const Vec<B>& target) {
  using S = typename B::Scalar;
  const std::size_t k = gens.size();
  const std::size_t d = target.size();
  for (const auto& g : gens)
    if (g.size() != d) throw Error(ErrorCode::DimError, "generator length differs from target length");

  Matrix<B> a(d, Vec<B>(k + 1));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = gens[j][i];
    a[i][k] = target[i];
  }
  const auto pivots = detail::row_reduce<B>(a, k);
  SpanSolve<B> out;
  out.rank = pivots.size();
  if (out.rank < k) return out;

  // Rows below the rank must have a vanishing right-hand side.
  for (std::size_t i = k; i < d; ++i) {
    if constexpr (std::is_same_v<B, Exact>) {
      if (sgn(a[i][k]) != 0) return out;
    }
  }
  Vec<B> x(k, S(0));
  for (std::size_t ii = k; ii-- > 0;) {
    S s = a[ii][k];
    for (std::size_t j = ii + 1; j < k; ++j) s -= a[ii][j] * x[j];
    x[ii] = s / a[ii][ii];
  }
  if constexpr (std::is_same_v<B, Float>) {
    double scale = 1.0;
    for (const auto& t : target) scale = std::max(scale, std::abs(t));
    for (std::size_t i = 0; i < d; ++i) {
      double res = -target[i];
      for (std::size_t j = 0; j < k; ++j) res += gens[j][i] * x[j];
      if (std::abs(res) > Float::tolerance() * scale) return out;
    }
  }
  out.coefficients = std::move(x);
  return out;
}

template <Backend B>
std::size_t rank_of(std::span<const Vec<B>> vectors) {
  if (vectors.empty()) return 0;
  const std::size_t d = vectors.front().size();
  Matrix<B> a(d, Vec<B>(vectors.size()));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      if (vectors[j].size() != d) throw Error(ErrorCode::DimError, "vectors of different lengths");
      a[i][j] = vectors[j][i];
    }
  return detail::row_reduce<B>(a, vectors.size()).size();
}

/// A nonzero vector orthogonal (under the plain coordinate pairing) to the
/// given d-1 independent vectors in dimension d.
template <Backend B>
Vec<B> orthogonal_complement_vector(std::span<const Vec<B>> vectors, std::size_t d) {
  using S = typename B::Scalar;
  // Rows are the constraints; solve for a kernel vector.
  Matrix<B> a;
  for (const auto& v : vectors) {
    if (v.size() != d) throw Error(ErrorCode::DimError, "vector length differs from ambient dimension");
    a.push_back(v);
  }
  if (a.empty()) {
    Vec<B> e(d, S(0));
    if (d > 0) e[0] = 1;
    return e;
  }
  auto pivots = detail::row_reduce<B>(a, d);
  if (pivots.size() != d - 1)
    throw Error(ErrorCode::DimError, "expected d-1 independent vectors for a normal direction");
  std::size_t free_col = 0;
  for (std::size_t c = 0, p = 0; c < d; ++c) {
    if (p < pivots.size() && pivots[p] == c) { ++p; continue; }
    free_col = c;
    break;
  }
  Vec<B> x(d, S(0));
  x[free_col] = 1;
  for (std::size_t ii = pivots.size(); ii-- > 0;) {
    const std::size_t c = pivots[ii];
    S s = 0;
    for (std::size_t j = c + 1; j < d; ++j) s -= a[ii][j] * x[j];
    x[c] = s / a[ii][c];
  }
  return x;
}

}  // namespace matsumoto
