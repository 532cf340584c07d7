#pragma once

#include <deque>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "matsumoto/graph.hpp"

namespace matsumoto {

/// Slot bijection induced by the compact edge leaving v through `slot`:
/// result[i] is the slot at the far end matched with slot i at v. The
/// traversed edge matches itself; every other slot is matched by equal
/// images in V / R*alpha, alpha being the arrow root.
template <Backend B>
std::vector<std::size_t> edge_correspondence(const MGraph<B>& g, VertexId v, std::size_t slot) {
  const auto& rv = g.vertex(v);
  const Slot& s = rv.slots.at(slot);
  if (!s.compact()) throw Error(ErrorCode::DimError, "edge correspondence needs a compact edge");
  const auto& rw = g.vertex(s.to);
  const std::size_t d = g.dim();
  const auto& roots = g.roots();

  auto back = g.slot_with_via(s.to, g.neg_or_self(s.via));
  if (!back) throw Error(ErrorCode::AxiomViolation, "edge has no reverse slot");

  std::vector<Vec<B>> frame;
  for (std::size_t i = 0; i < d; ++i)
    if (i != slot) frame.push_back(roots[rv.basis[i]].ray.dir);
  const Ray<B>& alpha = roots[s.via].ray;

  std::vector<RayKey> far_keys(d);
  for (std::size_t j = 0; j < d; ++j)
    if (j != *back) far_keys[j] = quotient_ray(alpha, roots[rw.basis[j]].ray, std::span<const Vec<B>>(frame)).key;

  std::vector<std::size_t> out(d);
  std::vector<char> used(d, 0);
  out[slot] = *back;
  used[*back] = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (i == slot) continue;
    const RayKey k = quotient_ray(alpha, roots[rv.basis[i]].ray, std::span<const Vec<B>>(frame)).key;
    std::optional<std::size_t> match;
    for (std::size_t j = 0; j < d; ++j) {
      if (j == *back || far_keys[j] != k) continue;
      if (match) throw Error(ErrorCode::AxiomViolation, "ambiguous quotient match across edge");
      match = j;
    }
    if (!match || used[*match])
      throw Error(ErrorCode::AxiomViolation, "no quotient match for slot " + std::to_string(i) + " at vertex " +
                                                 std::to_string(idx(v)));
    out[i] = *match;
    used[*match] = 1;
  }
  return out;
}

/// Colors of every edge end: slot_color[v][i] is the color of the edge in
/// slot i at v. Compact edges get the same color from both ends.
struct Coloring {
  std::size_t palette = 0;
  std::vector<std::vector<std::size_t>> slot_color;
};

/// A closed walk whose transport is not the identity.
struct ColoringWitness {
  Path cycle;
};

struct Holonomy {
  std::vector<std::size_t> perm;  // start slot i is carried to slot perm[i]
  bool identity() const {
    for (std::size_t i = 0; i < perm.size(); ++i)
      if (perm[i] != i) return false;
    return true;
  }
};

template <Backend B>
Holonomy holonomy(const MGraph<B>& g, const Path& cycle) {
  if (cycle.end() != cycle.start) throw Error(ErrorCode::NotClosed, "walk does not return to its start");
  Holonomy h;
  h.perm.resize(g.dim());
  std::iota(h.perm.begin(), h.perm.end(), std::size_t{0});
  VertexId u = cycle.start;
  for (const auto& st : cycle.steps) {
    auto slot = g.slot_with_via(u, st.via);
    if (!slot) throw Error(ErrorCode::BadPath, "walk uses a missing edge");
    const auto bij = edge_correspondence(g, u, *slot);
    for (auto& p : h.perm) p = bij[p];
    u = st.to;
  }
  return h;
}

namespace detail {

struct SpanningTree {
  std::vector<std::optional<std::pair<VertexId, std::size_t>>> parent;  // parent vertex and its slot
  std::vector<VertexId> order;
};

template <Backend B>
SpanningTree bfs_tree(const MGraph<B>& g) {
  SpanningTree t;
  t.parent.assign(g.vertex_count(), std::nullopt);
  std::vector<char> seen(g.vertex_count(), 0);
  std::deque<VertexId> q{g.base()};
  seen[idx(g.base())] = 1;
  while (!q.empty()) {
    VertexId u = q.front();
    q.pop_front();
    t.order.push_back(u);
    const auto& slots = g.vertex(u).slots;
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (slots[i].compact() && !seen[idx(slots[i].to)]) {
        seen[idx(slots[i].to)] = 1;
        t.parent[idx(slots[i].to)] = std::pair{u, i};
        q.push_back(slots[i].to);
      }
  }
  if (t.order.size() != g.vertex_count()) throw Error(ErrorCode::OutOfWindow, "window is not connected");
  return t;
}

// Tree path from the base to v.
template <Backend B>
Path tree_path(const MGraph<B>& g, const SpanningTree& t, VertexId v) {
  std::vector<Step> rev;
  while (t.parent[idx(v)]) {
    auto [p, slot] = *t.parent[idx(v)];
    rev.push_back({g.vertex(p).slots[slot].via, v});
    v = p;
  }
  return Path{g.base(), {rev.rbegin(), rev.rend()}};
}

template <Backend B>
Path reversed_path(const MGraph<B>& g, const Path& p) {
  Path out{p.end(), {}};
  for (std::size_t i = p.size(); i-- > 0;) out.steps.push_back({g.neg_or_self(p.root(i)), p.vertex_at(i)});
  return out;
}

}  // namespace detail

/// Fundamental cycles of the BFS spanning tree, each a closed walk at the base.
template <Backend B>
std::vector<Path> cycle_basis(const MGraph<B>& g) {
  const auto t = detail::bfs_tree(g);
  std::vector<Path> out;
  for (VertexId u : t.order) {
    const auto& slots = g.vertex(u).slots;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const Slot& s = slots[i];
      if (!s.compact() || idx(s.to) < idx(u)) continue;
      if (t.parent[idx(s.to)] && t.parent[idx(s.to)]->first == u && t.parent[idx(s.to)]->second == i) continue;
      if (t.parent[idx(u)] && t.parent[idx(u)]->first == s.to) {
        auto back = g.slot_with_via(s.to, g.neg_or_self(s.via));
        if (back && t.parent[idx(u)]->second == *back) continue;
      }
      Path c = detail::tree_path(g, t, u);
      c.steps.push_back({s.via, s.to});
      c.append(detail::reversed_path(g, detail::tree_path(g, t, s.to)));
      out.push_back(std::move(c));
    }
  }
  return out;
}

/// Transports the palette from the base along a BFS tree and checks every
/// other edge. `palette[i]` is the color given to base slot i (identity by
/// default).
template <Backend B>
std::variant<Coloring, ColoringWitness> global_coloring(const MGraph<B>& g, std::vector<std::size_t> palette = {}) {
  const std::size_t d = g.dim();
  if (palette.empty()) {
    palette.resize(d);
    std::iota(palette.begin(), palette.end(), std::size_t{0});
  }
  if (palette.size() != d) throw Error(ErrorCode::DimError, "palette size must equal the degree");
  const auto t = detail::bfs_tree(g);
  Coloring c;
  c.palette = d;
  c.slot_color.assign(g.vertex_count(), {});
  c.slot_color[idx(g.base())] = palette;
  for (VertexId u : t.order) {
    const auto& slots = g.vertex(u).slots;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i].compact()) continue;
      const VertexId w = slots[i].to;
      const auto bij = edge_correspondence(g, u, i);
      std::vector<std::size_t> moved(d);
      for (std::size_t k = 0; k < d; ++k) moved[bij[k]] = c.slot_color[idx(u)][k];
      auto& target = c.slot_color[idx(w)];
      if (target.empty()) {
        target = std::move(moved);
      } else if (target != moved) {
        Path cycle = detail::tree_path(g, t, u);
        cycle.steps.push_back({slots[i].via, w});
        cycle.append(detail::reversed_path(g, detail::tree_path(g, t, w)));
        return ColoringWitness{std::move(cycle)};
      }
    }
  }
  return c;
}

/// Stable textual id of an edge: "u-w" (u < w) for compact edges,
/// "v-inf-i" for the infinite edge in slot i, "v-open-i" for window cuts.
inline std::string edge_name(VertexId v, const Slot& s, std::size_t slot) {
  if (s.compact()) {
    auto a = std::min(idx(v), idx(s.to)), b = std::max(idx(v), idx(s.to));
    return std::to_string(a) + "-" + std::to_string(b);
  }
  return std::to_string(idx(v)) + (s.infinite() ? "-inf-" : "-open-") + std::to_string(slot);
}

}  // namespace matsumoto
