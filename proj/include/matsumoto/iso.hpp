#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <queue>
#include <vector>

#include "matsumoto/coloring.hpp"

namespace matsumoto {

/// A colored-graph isomorphism with a matching bijection of root tables.
struct Isomorphism {
  std::vector<VertexId> vertex;
  std::vector<RootId> root;
  std::vector<std::size_t> color;  // palette permutation
};

namespace detail {

template <Backend B1, Backend B2>
std::optional<Isomorphism> try_extend(const MGraph<B1>& g, const Coloring& cg, const MGraph<B2>& h, const Coloring& ch,
                                      VertexId image_of_base, const std::vector<std::size_t>& perm) {
  constexpr std::uint32_t unset = UINT32_MAX;
  std::vector<std::uint32_t> vmap(g.vertex_count(), unset), vinv(h.vertex_count(), unset);
  std::vector<std::uint32_t> rmap(g.roots().size(), unset), rinv(h.roots().size(), unset);
  auto bind_root = [&](RootId a, RootId b) {
    if (rmap[idx(a)] == unset && rinv[idx(b)] == unset) {
      rmap[idx(a)] = idx(b);
      rinv[idx(b)] = idx(a);
      return true;
    }
    return rmap[idx(a)] == idx(b) && rinv[idx(b)] == idx(a);
  };
  auto bind_vertex = [&](VertexId a, VertexId b) {
    if (vmap[idx(a)] == unset && vinv[idx(b)] == unset) {
      vmap[idx(a)] = idx(b);
      vinv[idx(b)] = idx(a);
      return true;
    }
    return vmap[idx(a)] == idx(b) && vinv[idx(b)] == idx(a);
  };

  std::queue<VertexId> q;
  bind_vertex(g.base(), image_of_base);
  q.push(g.base());
  while (!q.empty()) {
    const VertexId u = q.front();
    q.pop();
    const auto& ru = g.vertex(u);
    const auto& rv = h.vertex(vertex_id(vmap[idx(u)]));
    if (ru.interior != rv.interior || ru.slots.size() != rv.slots.size()) return std::nullopt;
    for (std::size_t i = 0; i < ru.slots.size(); ++i) {
      const std::size_t want = perm[cg.slot_color[idx(u)][i]];
      const auto& hc = ch.slot_color[idx(rv.id)];
      const auto it = std::find(hc.begin(), hc.end(), want);
      if (it == hc.end()) return std::nullopt;
      const std::size_t j = static_cast<std::size_t>(it - hc.begin());
      const Slot& a = ru.slots[i];
      const Slot& b = rv.slots[j];
      if (a.kind != b.kind) return std::nullopt;
      if (!bind_root(a.via, b.via) || !bind_root(ru.basis[i], rv.basis[j])) return std::nullopt;
      if (a.compact()) {
        const bool fresh = vmap[idx(a.to)] == unset;
        if (!bind_vertex(a.to, b.to)) return std::nullopt;
        if (fresh) q.push(a.to);
      }
    }
  }
  if (g.vertex_count() != h.vertex_count() || g.roots().size() != h.roots().size()) return std::nullopt;
  for (auto x : vmap)
    if (x == unset) return std::nullopt;
  for (auto x : rmap)
    if (x == unset) return std::nullopt;
  for (const auto& e : g.roots().entries()) {
    const auto& f = h.roots()[root_id(rmap[idx(e.id)])];
    if (e.invertible != f.invertible || e.neg.has_value() != f.neg.has_value()) return std::nullopt;
    if (e.neg && rmap[idx(*e.neg)] != idx(*f.neg)) return std::nullopt;
  }
  for (const auto& v : g.vertices()) {
    if (!v.interior) continue;
    const VertexId w = vertex_id(vmap[idx(v.id)]);
    for (const auto& e : g.roots().entries())
      if (g.positive_set(v.id).contains(e.id) != h.positive_set(w).contains(root_id(rmap[idx(e.id)]))) return std::nullopt;
  }
  Isomorphism iso;
  for (auto x : vmap) iso.vertex.push_back(vertex_id(x));
  for (auto x : rmap) iso.root.push_back(root_id(x));
  iso.color = perm;
  return iso;
}

}  // namespace detail

/// Searches for an isomorphism of Matsumoto graphs: vertices, slots (with
/// colors up to a palette permutation), root tables with negation and the
/// positive systems of interior vertices all correspond. Requires both
/// graphs to admit a global coloring.
template <Backend B1, Backend B2>
std::optional<Isomorphism> find_isomorphism(const MGraph<B1>& g, const MGraph<B2>& h) {
  if (g.vertex_count() != h.vertex_count() || g.roots().size() != h.roots().size() || g.dim() != h.dim())
    return std::nullopt;
  auto cg = global_coloring(g);
  auto ch = global_coloring(h);
  if (!std::holds_alternative<Coloring>(cg) || !std::holds_alternative<Coloring>(ch)) return std::nullopt;
  const auto& colg = std::get<Coloring>(cg);
  const auto& colh = std::get<Coloring>(ch);
  std::vector<std::size_t> perm(g.dim());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    for (const auto& w : h.vertices())
      if (auto iso = detail::try_extend(g, colg, h, colh, w.id, perm)) return iso;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace matsumoto
