#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matsumoto/axioms.hpp"
#include "matsumoto/graph.hpp"

namespace matsumoto {

/// A point of the dual space, paired with roots by the coordinate dot product.
template <Backend B>
using Functional = Vec<B>;

/// xi lies in the chamber of v: <xi, alpha> >= 0 for every basis root.
template <Backend B>
bool chamber_contains(const MGraph<B>& g, VertexId v, const Functional<B>& xi) {
  require_interior(g, v);
  if (xi.size() != g.dim()) throw Error(ErrorCode::DimError, "functional has the wrong length");
  for (RootId r : g.vertex(v).basis)
    if (B::sign(dot<B>(xi, g.roots()[r].ray.dir)) < 0) return false;
  return true;
}

/// Descends from the base towards a chamber containing xi by crossing the
/// lowest-slot invertible basis root that is negative on xi. Returns none
/// when a noninvertible basis root is negative (xi is outside D); throws
/// OutOfWindow when the walk leaves the window.
template <Backend B>
std::optional<VertexId> locate(const MGraph<B>& g, const Functional<B>& xi) {
  if (xi.size() != g.dim()) throw Error(ErrorCode::DimError, "functional has the wrong length");
  VertexId u = g.base();
  for (std::size_t steps = 0; steps <= g.vertex_count(); ++steps) {
    const auto& rec = g.vertex(u);
    std::optional<std::size_t> cross;
    for (std::size_t i = 0; i < rec.basis.size(); ++i) {
      const auto& root = g.roots()[rec.basis[i]];
      if (B::sign(dot<B>(xi, root.ray.dir)) >= 0) continue;
      if (!root.invertible) return std::nullopt;
      if (!cross) cross = i;
    }
    if (!cross) return u;
    const Slot& s = rec.slots[*cross];
    if (!s.compact()) throw Error(ErrorCode::OutOfWindow, "descent leaves the window at vertex " + std::to_string(idx(u)));
    u = s.to;
  }
  throw Error(ErrorCode::AxiomViolation, "descent does not terminate");
}

/// Window-sound test of the convexity characterization: every noninvertible
/// root is nonnegative on xi, and every invertible root positive at the base
/// but negative on xi labels an edge between interior vertices (so the
/// negative set is certified finite inside the window).
template <Backend B>
bool in_D_prime(const MGraph<B>& g, const Functional<B>& xi) {
  if (xi.size() != g.dim()) throw Error(ErrorCode::DimError, "functional has the wrong length");
  std::vector<char> certified(g.roots().size(), 0);
  for (const auto& v : g.vertices()) {
    if (!v.interior) continue;
    for (const auto& s : v.slots)
      if (s.compact() && g.vertex(s.to).interior) certified[idx(s.via)] = 1;
  }
  const RootSet& base = g.positive_set(g.base());
  for (const auto& e : g.roots().entries()) {
    const int sign = B::sign(dot<B>(xi, e.ray.dir));
    if (!e.invertible) {
      if (sign < 0) return false;
    } else if (sign < 0 && base.contains(e.id) && !certified[idx(e.id)]) {
      return false;
    }
  }
  return true;
}

/// Smallest angle between a root and any other root of the table.
template <Backend B>
double isolation_gap(const MGraph<B>& g, RootId r) {
  double best = std::numeric_limits<double>::infinity();
  const auto& dir = g.roots()[r].ray.dir;
  for (const auto& e : g.roots().entries())
    if (e.id != r) best = std::min(best, angle_between<B>(dir, e.ray.dir));
  return best;
}

/// Extreme rays of the chamber of v: the dual basis xi_i with
/// <xi_i, alpha_j> = 0 for j != i and > 0 for j = i.
template <Backend B>
std::vector<Vec<B>> chamber_generators(const MGraph<B>& g, VertexId v) {
  const auto& basis = g.vertex(v).basis;
  std::vector<Vec<B>> out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::vector<Vec<B>> others;
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (j != i) others.push_back(g.roots()[basis[j]].ray.dir);
    Vec<B> xi = orthogonal_complement_vector<B>(std::span<const Vec<B>>(others), g.dim());
    if (B::sign(dot<B>(xi, g.roots()[basis[i]].ray.dir)) < 0) xi = negated<B>(xi);
    out.push_back(canonicalize<B>(xi).dir);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fans

/// Simplicial chamber given by its extreme rays. Facet i is the one opposite
/// generator i; open[i] marks a facet shared with a chamber outside the
/// materialized window.
struct FanChamber {
  std::vector<Vec<Exact>> generators;
  std::vector<bool> open;
  std::string label;
};

struct FanWall {
  std::vector<std::size_t> chambers;  // one (boundary or open) or two (shared)
  std::vector<std::size_t> facets;    // facet index within each chamber
  Vec<Exact> normal;                  // root direction, nonnegative on chambers[0]
  bool open = false;
};

struct Fan {
  std::size_t dim = 0;
  std::vector<FanChamber> chambers;
  std::vector<FanWall> walls;
  std::vector<std::pair<std::size_t, std::size_t>> adjacency;
  std::vector<std::string> notes;
};

namespace detail {

inline std::vector<Vec<Exact>> facet_generators(const FanChamber& c, std::size_t i) {
  std::vector<Vec<Exact>> out;
  for (std::size_t j = 0; j < c.generators.size(); ++j)
    if (j != i) out.push_back(c.generators[j]);
  return out;
}

inline std::string facet_key(const FanChamber& c, std::size_t i) {
  std::vector<RayKey> keys;
  for (const auto& v : facet_generators(c, i)) keys.push_back(canonicalize<Exact>(v).key);
  std::sort(keys.begin(), keys.end());
  std::string k;
  for (const auto& s : keys) k += s + '|';
  return k;
}

inline Vec<Exact> inward_normal(const FanChamber& c, std::size_t i, std::size_t dim) {
  auto facet = facet_generators(c, i);
  Vec<Exact> n = orthogonal_complement_vector<Exact>(std::span<const Vec<Exact>>(facet), dim);
  if (sgn(dot<Exact>(n, c.generators[i])) < 0) n = negated<Exact>(n);
  return canonicalize<Exact>(n).dir;
}

// Some facet normal of one chamber is nonpositive on all of the other.
inline bool separated(const FanChamber& p, const FanChamber& q, std::size_t dim) {
  auto splits = [dim](const FanChamber& a, const FanChamber& b) {
    for (std::size_t i = 0; i < a.generators.size(); ++i) {
      const auto n = inward_normal(a, i, dim);
      bool all = true;
      for (const auto& gen : b.generators)
        if (sgn(dot<Exact>(n, gen)) > 0) { all = false; break; }
      if (all) return true;
    }
    return false;
  };
  return splits(p, q) || splits(q, p);
}

}  // namespace detail

/// Validates chambers (simplicial, pairwise disjoint interiors) and derives
/// the walls and the adjacency.
inline Fan make_fan(std::size_t dim, std::vector<FanChamber> chambers, std::vector<std::string> notes = {}) {
  if (dim == 0 || dim > 3) throw Error(ErrorCode::BadFan, "fans are supported in dimensions 1 to 3");
  Fan fan;
  fan.dim = dim;
  fan.notes = std::move(notes);
  for (std::size_t c = 0; c < chambers.size(); ++c) {
    auto& ch = chambers[c];
    if (ch.generators.size() != dim) throw Error(ErrorCode::BadFan, "chamber " + std::to_string(c) + " is not simplicial");
    for (const auto& gen : ch.generators)
      if (gen.size() != dim) throw Error(ErrorCode::BadFan, "chamber " + std::to_string(c) + " has a generator of wrong length");
    if (rank_of<Exact>(std::span<const Vec<Exact>>(ch.generators)) != dim)
      throw Error(ErrorCode::BadFan, "chamber " + std::to_string(c) + " is degenerate");
    if (ch.open.empty()) ch.open.assign(dim, false);
    if (ch.open.size() != dim) throw Error(ErrorCode::BadFan, "open-facet flags must match the dimension");
  }
  for (std::size_t p = 0; p < chambers.size(); ++p)
    for (std::size_t q = p + 1; q < chambers.size(); ++q)
      if (!detail::separated(chambers[p], chambers[q], dim))
        throw Error(ErrorCode::BadFan, "chambers " + std::to_string(p) + " and " + std::to_string(q) + " overlap");

  std::map<std::string, std::size_t> wall_of;
  for (std::size_t c = 0; c < chambers.size(); ++c)
    for (std::size_t i = 0; i < dim; ++i) {
      const auto key = detail::facet_key(chambers[c], i);
      auto it = wall_of.find(key);
      if (it == wall_of.end()) {
        wall_of.emplace(key, fan.walls.size());
        fan.walls.push_back({{c}, {i}, detail::inward_normal(chambers[c], i, dim), chambers[c].open[i]});
      } else {
        auto& w = fan.walls[it->second];
        if (w.chambers.size() != 1 || w.open || chambers[c].open[i])
          throw Error(ErrorCode::BadFan, "wall shared inconsistently by chamber " + std::to_string(c));
        w.chambers.push_back(c);
        w.facets.push_back(i);
        fan.adjacency.emplace_back(w.chambers[0], c);
      }
    }
  fan.chambers = std::move(chambers);
  return fan;
}

/// One vertex per chamber, a compact edge per shared wall, an infinite edge
/// per unshared wall, an open slot per window cut. Roots are the inward wall
/// normals.
inline MGraph<Exact> dual_reconstruct(const Fan& fan) {
  const std::size_t d = fan.dim;
  std::vector<RootEntry<Exact>> entries;
  std::map<RayKey, std::size_t> id_of;
  auto intern = [&](const Vec<Exact>& v, bool invertible) {
    Ray<Exact> r = canonicalize<Exact>(v);
    auto [it, fresh] = id_of.emplace(r.key, entries.size());
    if (fresh) entries.push_back({root_id(entries.size()), r, invertible, std::nullopt});
    else entries[it->second].invertible = entries[it->second].invertible || invertible;
    return root_id(it->second);
  };

  std::vector<VertexRecord> verts(fan.chambers.size());
  for (std::size_t c = 0; c < verts.size(); ++c) {
    verts[c].id = vertex_id(c);
    verts[c].interior = true;
    verts[c].basis.resize(d);
    verts[c].slots.resize(d);
  }
  for (const auto& w : fan.walls) {
    for (std::size_t s = 0; s < w.chambers.size(); ++s) {
      const std::size_t c = w.chambers[s], f = w.facets[s];
      const auto normal = detail::inward_normal(fan.chambers[c], f, d);
      auto& v = verts[c];
      if (w.chambers.size() == 2) {
        const RootId in = intern(normal, true), out = intern(negated<Exact>(normal), true);
        v.basis[f] = in;
        v.slots[f] = {Slot::Kind::Compact, out, vertex_id(w.chambers[1 - s])};
      } else if (w.open) {
        const RootId in = intern(normal, true), out = intern(negated<Exact>(normal), true);
        v.basis[f] = in;
        v.slots[f] = {Slot::Kind::Open, out, {}};
        v.interior = false;
      } else {
        const RootId in = intern(normal, false);
        v.basis[f] = in;
        v.slots[f] = {Slot::Kind::Infinite, in, {}};
      }
    }
  }
  for (auto& e : entries)
    if (e.invertible) {
      auto it = id_of.find(opposite(e.ray).key);
      if (it == id_of.end()) throw Error(ErrorCode::AxiomViolation, "invertible wall root without its opposite");
      e.neg = root_id(it->second);
    }
  if (verts.empty()) throw Error(ErrorCode::BadFan, "fan has no chambers");
  return MGraph<Exact>(d, RootTable<Exact>(std::move(entries)), std::move(verts), vertex_id(0));
}

/// Chambers of every vertex of an exact graph (the dual picture).
inline Fan fan_of(const MGraph<Exact>& g) {
  std::vector<FanChamber> chambers;
  for (const auto& v : g.vertices()) {
    FanChamber c;
    c.generators = chamber_generators(g, v.id);
    for (const auto& s : v.slots) c.open.push_back(s.open());
    c.label = "v" + std::to_string(idx(v.id));
    chambers.push_back(std::move(c));
  }
  return make_fan(g.dim(), std::move(chambers));
}

// ---------------------------------------------------------------------------
// Triangle-midpoint example

struct MidpointExample {
  Fan fan;
  MGraph<Exact> graph;
  Ray<Exact> limit;                    // normal of the line M0 C, as the limit of the M0 Mk roots
  std::vector<RootId> fan_line_roots;  // k = 1..n: root of line M0 Mk on the side converging to `limit`
  std::map<std::string, std::vector<mpq_class>> points;  // slice coordinates
};

namespace detail {

inline Vec<Exact> lift(const std::vector<mpq_class>& p) { return {p[0], p[1], mpq_class(1)}; }

inline Vec<Exact> cross(const Vec<Exact>& a, const Vec<Exact>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Normal of the line through p and q, nonnegative at `inside`.
inline Vec<Exact> line_root(const std::vector<mpq_class>& p, const std::vector<mpq_class>& q,
                            const std::vector<mpq_class>& inside) {
  Vec<Exact> n = cross(lift(p), lift(q));
  if (sgn(dot<Exact>(n, lift(inside))) < 0) n = negated<Exact>(n);
  return n;
}

}  // namespace detail

/// Triangle A=(0,0), B=(1,0), C=(0,1) in the slice z = 1, M0 the midpoint of
/// BC and Mk = (0, 1 - 2^-k). Chambers ABM0, AM0M1 and M0 M(k-1) Mk for
/// k = 2..n; each chamber after the first is bounded by two fan lines
/// through M0 and one piece of AC. The last chamber is cut by the window.
inline MidpointExample midpoint_fan(std::size_t n) {
  if (n < 1) throw Error(ErrorCode::DimError, "midpoint fan needs depth >= 1");
  using P = std::vector<mpq_class>;
  std::map<std::string, P> pts;
  pts["A"] = {0, 0};
  pts["B"] = {1, 0};
  pts["C"] = {0, 1};
  pts["M0"] = {mpq_class(1, 2), mpq_class(1, 2)};
  auto m = [](std::size_t k) {
    mpq_class t(1);
    for (std::size_t i = 0; i < k; ++i) t /= 2;
    return P{mpq_class(0), 1 - t};
  };
  for (std::size_t k = 1; k <= n; ++k) pts["M" + std::to_string(k)] = m(k);

  // slot order: wall to the previous chamber (AB for the first), wall to the
  // next chamber, remaining boundary wall
  std::vector<std::array<std::string, 3>> tris;
  tris.push_back({"A", "B", "M0"});
  tris.push_back({"A", "M0", "M1"});
  for (std::size_t k = 2; k <= n; ++k) tris.push_back({"M0", "M" + std::to_string(k - 1), "M" + std::to_string(k)});

  std::vector<RootEntry<Exact>> entries;
  std::map<RayKey, std::size_t> id_of;
  auto intern = [&](const Vec<Exact>& v, bool invertible) {
    Ray<Exact> r = canonicalize<Exact>(v);
    auto [it, fresh] = id_of.emplace(r.key, entries.size());
    if (fresh) entries.push_back({root_id(entries.size()), r, invertible, std::nullopt});
    return root_id(it->second);
  };
  auto pair = [&](const Vec<Exact>& v) {
    RootId a = intern(v, true), b = intern(negated<Exact>(v), true);
    entries[idx(a)].neg = b;
    entries[idx(b)].neg = a;
    return std::pair{a, b};
  };

  std::vector<VertexRecord> verts(tris.size());
  for (std::size_t c = 0; c < tris.size(); ++c) {
    const auto& [x, y, z] = tris[c];
    auto& v = verts[c];
    v.id = vertex_id(c);
    v.interior = true;
    // walls as (endpoint, endpoint, opposite corner)
    std::array<std::array<std::string, 3>, 3> walls;
    if (c == 0) walls = {{{"A", "B", "M0"}, {"A", "M0", "B"}, {"B", "M0", "A"}}};
    else if (c == 1) walls = {{{"A", "M0", "M1"}, {"M0", "M1", "A"}, {"A", "M1", "M0"}}};
    else walls = {{{"M0", y, z}, {"M0", z, y}, {y, z, "M0"}}};
    for (std::size_t s = 0; s < 3; ++s) {
      const auto& [p, q, inside] = walls[s];
      const Vec<Exact> inward = detail::line_root(pts[p], pts[q], pts[inside]);
      const bool previous = s == 0 && c > 0;
      const bool next = s == 1;
      if (previous || next) {
        auto [in, out] = pair(inward);
        v.basis.push_back(in);
        if (previous) {
          v.slots.push_back({Slot::Kind::Compact, out, vertex_id(c - 1)});
        } else if (c + 1 < tris.size()) {
          v.slots.push_back({Slot::Kind::Compact, out, vertex_id(c + 1)});
        } else {
          v.slots.push_back({Slot::Kind::Open, out, {}});
          v.interior = false;
        }
      } else {
        const RootId r = intern(inward, false);
        v.basis.push_back(r);
        v.slots.push_back({Slot::Kind::Infinite, r, {}});
      }
    }
  }

  MidpointExample ex{Fan{}, MGraph<Exact>(3, RootTable<Exact>(entries), verts, vertex_id(0)),
                     canonicalize<Exact>(detail::line_root(pts["M0"], pts["C"], pts["A"])), {}, pts};
  for (std::size_t k = 1; k <= n; ++k) {
    Vec<Exact> r = detail::cross(detail::lift(pts["M0"]), detail::lift(pts["M" + std::to_string(k)]));
    if (sgn(dot<Exact>(r, ex.limit.dir)) < 0) r = negated<Exact>(r);
    ex.fan_line_roots.push_back(*ex.graph.roots().find(canonicalize<Exact>(r).key));
  }

  std::vector<FanChamber> chambers;
  for (std::size_t c = 0; c < tris.size(); ++c) {
    FanChamber ch;
    for (const auto& name : tris[c]) ch.generators.push_back(detail::lift(pts[name]));
    ch.label = tris[c][0] + tris[c][1] + tris[c][2];
    ch.open.assign(3, false);
    if (c + 1 == tris.size()) ch.open[c == 1 ? 0 : 1] = true;  // the wall M0 Mn
    chambers.push_back(std::move(ch));
  }
  ex.fan = make_fan(3, std::move(chambers),
                    {"chambers follow the non-degenerate tiling ABM0, AM0M1, M0M(k-1)Mk",
                     "wall AM0 separates the first two chambers and is a root",
                     "walls on line AC share one noninvertible root",
                     "line M0C bounds no chamber; it is reported as the limit direction"});
  return ex;
}

/// Axiom report of the midpoint graph with the construction notes attached.
inline Report midpoint_report(const MidpointExample& ex) {
  Report r = check_axioms(ex.graph);
  r.notes.insert(r.notes.end(), ex.fan.notes.begin(), ex.fan.notes.end());
  return r;
}

}  // namespace matsumoto
