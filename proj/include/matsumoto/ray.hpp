#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matsumoto/linalg.hpp"

namespace matsumoto {

/// Hashable canonical form of a ray; equal keys mean equal rays.
using RayKey = std::string;

template <Backend B>
struct Ray {
  Vec<B> dir;  // canonical representative
  RayKey key;

  std::size_t dim() const { return dir.size(); }
  friend bool operator==(const Ray& a, const Ray& b) { return a.key == b.key; }
};

namespace detail {

inline std::string float_key_component(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", x + 0.0);
  return buf;
}

}  // namespace detail

/// Canonical ray through v. Exact: coprime integer coordinates, same signs.
/// Float: unit length, coordinates within tolerance of zero snapped to
/// zero, key rounded to 12 significant digits.
template <Backend B>
Ray<B> canonicalize(const Vec<B>& v) {
  Ray<B> r;
  if constexpr (std::is_same_v<B, Exact>) {
    mpz_class den = 1, num = 0;
    for (const auto& x : v) den = lcm(den, mpz_class(x.get_den()));
    r.dir.reserve(v.size());
    for (const auto& x : v) {
      mpz_class n = x.get_num() * (den / x.get_den());
      num = gcd(num, n);
      r.dir.emplace_back(n);
    }
    if (num == 0) throw Error(ErrorCode::ZeroRay, "cannot canonicalize the zero vector");
    for (std::size_t i = 0; i < r.dir.size(); ++i) {
      r.dir[i] /= num;
      if (i) r.key += ',';
      r.key += r.dir[i].get_str();
    }
  } else {
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    const double norm = std::sqrt(norm2);
    if (!(norm > Float::tolerance())) throw Error(ErrorCode::ZeroRay, "cannot canonicalize a (numerically) zero vector");
    // unit input is kept as is so that canonicalization is idempotent
    const double scale = std::abs(norm - 1.0) <= 8 * std::numeric_limits<double>::epsilon() ? 1.0 : norm;
    r.dir.reserve(v.size());
    for (double x : v) {
      double y = x / scale;
      if (std::abs(y) <= Float::tolerance()) y = 0.0;
      r.dir.push_back(y);
    }
    for (std::size_t i = 0; i < r.dir.size(); ++i) {
      if (i) r.key += ',';
      r.key += detail::float_key_component(r.dir[i]);
    }
  }
  return r;
}

template <Backend B>
Ray<B> opposite(const Ray<B>& r) {
  return canonicalize<B>(negated<B>(r.dir));
}

/// Cone spanned by an ordered list of independent rays.
template <Backend B>
struct SimplicialCone {
  std::vector<Ray<B>> gens;

  std::vector<Vec<B>> generator_vectors() const {
    std::vector<Vec<B>> out;
    out.reserve(gens.size());
    for (const auto& g : gens) out.push_back(g.dir);
    return out;
  }
};

/// Coefficients of r in the cone generators, or none when r lies outside
/// their span.
template <Backend B>
std::optional<Vec<B>> cone_coords(const SimplicialCone<B>& cone, const Ray<B>& r) {
  const auto gens = cone.generator_vectors();
  for (const auto& g : gens)
    if (g.size() != r.dim()) throw Error(ErrorCode::DimError, "cone and ray live in different dimensions");
  if (gens.size() > r.dim()) throw Error(ErrorCode::DimError, "more generators than the ambient dimension");
  auto solved = solve_in_span<B>(std::span<const Vec<B>>(gens), r.dir);
  if (solved.rank < gens.size()) throw Error(ErrorCode::DimError, "cone generators are linearly dependent");
  return solved.coefficients;
}

template <Backend B>
bool all_nonnegative(const Vec<B>& coeffs) {
  for (const auto& c : coeffs)
    if (B::sign(c) < 0) return false;
  return true;
}

template <Backend B>
bool in_cone(const SimplicialCone<B>& cone, const Ray<B>& r) {
  auto c = cone_coords(cone, r);
  return c && all_nonnegative<B>(*c);
}

/// Image of r in V / R*modulus, written in the complement frame and
/// canonicalized.
template <Backend B>
Ray<B> quotient_ray(const Ray<B>& modulus, const Ray<B>& r, std::span<const Vec<B>> frame) {
  const std::size_t d = modulus.dim();
  if (r.dim() != d || frame.size() + 1 != d)
    throw Error(ErrorCode::DimError, "quotient frame must have d-1 vectors of length d");
  std::vector<Vec<B>> basis;
  basis.reserve(d);
  basis.push_back(modulus.dir);
  for (const auto& f : frame) basis.push_back(f);
  auto solved = solve_in_span<B>(std::span<const Vec<B>>(basis), r.dir);
  if (!solved.coefficients) throw Error(ErrorCode::DimError, "modulus and frame do not form a basis");
  Vec<B> image(solved.coefficients->begin() + 1, solved.coefficients->end());
  bool all_zero = true;
  for (const auto& x : image)
    if (B::sign(x) != 0) all_zero = false;
  if (all_zero) throw Error(ErrorCode::DegenerateProjection, "ray is proportional to the modulus");
  return canonicalize<B>(image);
}

/// Angle in radians between the unit directions of two rays.
template <Backend B>
double angle_between(const Vec<B>& a, const Vec<B>& b) {
  auto u = to_doubles<B>(a), v = to_doubles<B>(b);
  double nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) { nu += u[i] * u[i]; nv += v[i] * v[i]; }
  nu = std::sqrt(nu);
  nv = std::sqrt(nv);
  double chord = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double t = u[i] / nu - v[i] / nv;
    chord += t * t;
  }
  return 2.0 * std::asin(std::min(1.0, std::sqrt(chord) / 2.0));
}

}  // namespace matsumoto
