#pragma once

#include <cmath>
#include <vector>

#include "matsumoto.hpp"

namespace fixtures {

using namespace matsumoto;

inline MGraph<Float> hexagon() { return build_cayley<Float>(CoxeterMatrix::dihedral(3), 10).graph; }

inline MGraph<Exact> weyl(std::vector<std::vector<long>> a, std::size_t radius = 30) {
  return build_weyl(CartanMatrix::from_entries(a), radius).graph;
}

inline MGraph<Exact> a2() { return weyl({{2, -1}, {-1, 2}}); }
inline MGraph<Exact> b2() { return weyl({{2, -1}, {-2, 2}}); }
inline MGraph<Exact> c2() { return weyl({{2, -2}, {-1, 2}}); }
inline MGraph<Exact> g2() { return weyl({{2, -1}, {-3, 2}}); }
inline MGraph<Exact> a3() { return weyl({{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}); }
inline MGraph<Exact> b3() { return weyl({{2, -1, 0}, {-1, 2, -2}, {0, -1, 2}}); }
inline MGraph<Exact> a1_cubed() { return weyl({{2, 0, 0}, {0, 2, 0}, {0, 0, 2}}); }

// Rebuilds g with the ray of one edge (slot `slot` at v, both directions)
// rotated in the plane of the first two coordinates. The edge gets a fresh
// root pair; other edges carrying the old ray keep it.
inline MGraph<Float> perturb_edge(const MGraph<Float>& g, VertexId v, std::size_t slot, double degrees) {
  auto entries = g.roots().entries();
  auto verts = g.vertices();
  const double t = degrees * std::acos(-1.0) / 180.0;
  const Slot s = verts[idx(v)].slots[slot];
  Vec<Float> dir = entries[idx(s.via)].ray.dir;
  const double x = dir[0], y = dir[1];
  dir[0] = std::cos(t) * x - std::sin(t) * y;
  dir[1] = std::sin(t) * x + std::cos(t) * y;
  const RootId fwd = root_id(entries.size()), back = root_id(entries.size() + 1);
  entries.push_back({fwd, canonicalize<Float>(dir), true, back});
  entries.push_back({back, opposite(canonicalize<Float>(dir)), true, fwd});
  verts[idx(v)].slots[slot].via = fwd;
  verts[idx(v)].basis[slot] = back;
  auto& w = verts[idx(s.to)];
  for (std::size_t j = 0; j < w.slots.size(); ++j)
    if (w.slots[j].compact() && w.slots[j].to == v) {
      w.slots[j].via = back;
      w.basis[j] = fwd;
    }
  return MGraph<Float>(g.dim(), RootTable<Float>(entries), verts, g.base());
}

// Rebuilds g with root `dup` given the ray of root `of`.
template <Backend B>
MGraph<B> duplicate_ray(const MGraph<B>& g, RootId dup, RootId of) {
  auto entries = g.roots().entries();
  entries[idx(dup)].ray = entries[idx(of)].ray;
  return MGraph<B>(g.dim(), RootTable<B>(entries), g.vertices(), g.base());
}

// Same graph with every root ray mapped by the matrix m (rows).
inline MGraph<Float> linear_image(const MGraph<Float>& g, const std::vector<std::vector<double>>& m) {
  auto entries = g.roots().entries();
  for (auto& e : entries) {
    Vec<Float> out(g.dim(), 0.0);
    for (std::size_t i = 0; i < g.dim(); ++i)
      for (std::size_t j = 0; j < g.dim(); ++j) out[i] += m[i][j] * e.ray.dir[j];
    e.ray = canonicalize<Float>(out);
  }
  return MGraph<Float>(g.dim(), RootTable<Float>(entries), g.vertices(), g.base());
}

// Hexagon with the A2 roots at multiples of 60 degrees.
inline MGraph<Float> euclidean_hexagon() {
  const double h = std::sqrt(3.0) / 2;
  return linear_image(hexagon(), {{1.0, -0.5}, {0.0, h}});
}

// Three vertices joined in a cycle, degree 2, roots at 0, 120, 240 degrees
// and their negatives.
inline MGraph<Exact> triangle() {
  std::vector<RootEntry<Exact>> e;
  const std::vector<Vec<Exact>> dirs{{1, 0}, {-1, 1}, {0, -1}};
  for (std::size_t i = 0; i < 3; ++i) {
    e.push_back({root_id(2 * i), canonicalize<Exact>(dirs[i]), true, root_id(2 * i + 1)});
    e.push_back({root_id(2 * i + 1), opposite(canonicalize<Exact>(dirs[i])), true, root_id(2 * i)});
  }
  // edge k joins vertex k and k+1; arrow k -> k+1 carries root 2k, back 2k+1
  std::vector<VertexRecord> vs(3);
  for (std::size_t v = 0; v < 3; ++v) {
    vs[v].id = vertex_id(v);
    vs[v].interior = true;
    const std::size_t out = v, in = (v + 2) % 3;
    vs[v].basis = {root_id(2 * out + 1), root_id(2 * in)};
    vs[v].slots = {{Slot::Kind::Compact, root_id(2 * out), vertex_id((v + 1) % 3)},
                   {Slot::Kind::Compact, root_id(2 * in + 1), vertex_id(in)}};
  }
  return MGraph<Exact>(2, RootTable<Exact>(e), vs, vertex_id(0));
}

// One vertex, d infinite edges along the coordinate axes.
inline MGraph<Exact> star(std::size_t d) {
  std::vector<RootEntry<Exact>> e;
  VertexRecord v;
  v.id = vertex_id(0);
  v.interior = true;
  for (std::size_t i = 0; i < d; ++i) {
    Vec<Exact> x(d, 0);
    x[i] = 1;
    e.push_back({root_id(i), canonicalize<Exact>(x), false, std::nullopt});
    v.basis.push_back(root_id(i));
    v.slots.push_back({Slot::Kind::Infinite, root_id(i), {}});
  }
  return MGraph<Exact>(d, RootTable<Exact>(e), {v}, vertex_id(0));
}

// d = 1: two vertices joined by one compact edge.
inline MGraph<Exact> segment_d1() {
  std::vector<RootEntry<Exact>> e{{root_id(0), canonicalize<Exact>(Vec<Exact>{1}), true, root_id(1)},
                                  {root_id(1), canonicalize<Exact>(Vec<Exact>{-1}), true, root_id(0)}};
  VertexRecord a{vertex_id(0), {root_id(1)}, {{Slot::Kind::Compact, root_id(0), vertex_id(1)}}, true, {}};
  VertexRecord b{vertex_id(1), {root_id(0)}, {{Slot::Kind::Compact, root_id(1), vertex_id(0)}}, true, {}};
  return MGraph<Exact>(1, RootTable<Exact>(e), {a, b}, vertex_id(0));
}

template <Backend B>
std::vector<std::vector<std::size_t>> adjacency(const MGraph<B>& g) {
  std::vector<std::vector<std::size_t>> adj(g.vertex_count());
  for (const auto& v : g.vertices())
    for (const auto& s : v.slots)
      if (s.compact()) adj[idx(v.id)].push_back(idx(s.to));
  return adj;
}

}  // namespace fixtures
