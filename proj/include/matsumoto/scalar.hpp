#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

namespace matsumoto {

/// Exact backend: arbitrary-precision rationals. Signs are exact.
struct Exact {
  using Scalar = mpq_class;
  static constexpr std::string_view name = "rational";

  static int sign(const Scalar& x) { return sgn(x); }
  static Scalar from_int(long v) { return Scalar(v); }
  static double to_double(const Scalar& x) { return x.get_d(); }
};

/// Floating backend: binary64 with a global tolerance. The tolerance is
/// read once from MK_TOL (default 1e-9).
struct Float {
  using Scalar = double;
  static constexpr std::string_view name = "float";
  static constexpr double kDefaultTolerance = 1e-9;

  static double tolerance() {
    static const double tol = [] {
      if (const char* env = std::getenv("MK_TOL")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end != env && v > 0.0 && std::isfinite(v)) return v;
      }
      return kDefaultTolerance;
    }();
    return tol;
  }

  static int sign(double x) {
    const double tol = tolerance();
    return x > tol ? 1 : (x < -tol ? -1 : 0);
  }
  static double from_int(long v) { return static_cast<double>(v); }
  static double to_double(double x) { return x; }
};

template <class B>
concept Backend = requires(const typename B::Scalar& s) {
  { B::sign(s) } -> std::convertible_to<int>;
  { B::to_double(s) } -> std::convertible_to<double>;
  { B::name } -> std::convertible_to<std::string_view>;
};

template <Backend B>
using Vec = std::vector<typename B::Scalar>;

template <Backend B>
using Matrix = std::vector<Vec<B>>;  // row-major

template <Backend B>
typename B::Scalar dot(const Vec<B>& a, const Vec<B>& b) {
  typename B::Scalar s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <Backend B>
Vec<B> negated(Vec<B> v) {
  for (auto& x : v) x = -x;
  return v;
}

template <Backend B>
std::vector<double> to_doubles(const Vec<B>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(B::to_double(x));
  return out;
}

template <Backend B>
Matrix<B> identity_matrix(std::size_t n) {
  Matrix<B> m(n, Vec<B>(n, typename B::Scalar(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

template <Backend B>
Matrix<B> multiply(const Matrix<B>& a, const Matrix<B>& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Matrix<B> c(n, Vec<B>(m, typename B::Scalar(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (B::sign(a[i][l]) == 0 && a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

template <Backend B>
Vec<B> column(const Matrix<B>& m, std::size_t j) {
  Vec<B> c;
  c.reserve(m.size());
  for (const auto& row : m) c.push_back(row[j]);
  return c;
}

}  // namespace matsumoto
