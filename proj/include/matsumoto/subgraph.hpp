#pragma once

#include <algorithm>
#include <deque>

#include "matsumoto/graph.hpp"

namespace matsumoto {

/// Degree-k subgraph through a vertex whose edge roots lie in the span of k
/// chosen basis roots, re-coordinatized in that span.
template <Backend B>
struct SpanSubgraph {
  MGraph<B> graph;
  std::vector<VertexId> original_vertex;  // sub id -> id in the parent graph
  std::vector<RootId> original_root;      // sub root id -> id in the parent graph
};

template <Backend B>
SpanSubgraph<B> subgraph_span(const MGraph<B>& g, VertexId v, std::vector<std::size_t> slots) {
  require_interior(g, v);
  const std::size_t d = g.dim();
  std::sort(slots.begin(), slots.end());
  if (slots.empty() || std::adjacent_find(slots.begin(), slots.end()) != slots.end() || slots.back() >= d)
    throw Error(ErrorCode::DimError, "slot selection must be a nonempty set of basis indices");
  const std::size_t k = slots.size();

  std::vector<Vec<B>> span_gens;
  for (auto s : slots) span_gens.push_back(g.roots()[g.vertex(v).basis[s]].ray.dir);

  // coordinates of each table root in the span, computed on demand
  std::vector<std::optional<std::optional<Vec<B>>>> coords(g.roots().size());
  auto in_span = [&](RootId r) -> const std::optional<Vec<B>>& {
    auto& slot = coords[idx(r)];
    if (!slot) {
      auto solved = solve_in_span<B>(std::span<const Vec<B>>(span_gens), g.roots()[r].ray.dir);
      slot = std::move(solved.coefficients);
    }
    return *slot;
  };

  std::vector<VertexId> order;
  std::unordered_map<std::size_t, std::size_t> sub_of;
  std::vector<std::vector<std::size_t>> kept_slots;
  std::deque<VertexId> q{v};
  sub_of[idx(v)] = 0;
  order.push_back(v);
  while (!q.empty()) {
    VertexId u = q.front();
    q.pop_front();
    const auto& rec = g.vertex(u);
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < d; ++i)
      if (in_span(rec.basis[i])) kept.push_back(i);
    if (kept.size() != k)
      throw Error(ErrorCode::AxiomViolation, "vertex " + std::to_string(idx(u)) + " has " + std::to_string(kept.size()) +
                                                 " basis roots in the span, expected " + std::to_string(k));
    for (auto i : kept) {
      const Slot& s = rec.slots[i];
      if (s.compact() && !sub_of.count(idx(s.to))) {
        sub_of[idx(s.to)] = order.size();
        order.push_back(s.to);
        q.push_back(s.to);
      }
    }
    kept_slots.push_back(std::move(kept));
  }

  std::vector<RootId> original_root;
  std::unordered_map<std::size_t, std::size_t> sub_root;
  auto intern = [&](RootId r) {
    auto it = sub_root.find(idx(r));
    if (it != sub_root.end()) return root_id(it->second);
    sub_root[idx(r)] = original_root.size();
    original_root.push_back(r);
    return root_id(original_root.size() - 1);
  };

  std::vector<VertexRecord> sub_vertices;
  for (std::size_t n = 0; n < order.size(); ++n) {
    const auto& rec = g.vertex(order[n]);
    VertexRecord sv;
    sv.id = vertex_id(n);
    sv.interior = true;
    for (auto i : kept_slots[n]) {
      sv.basis.push_back(intern(rec.basis[i]));
      Slot s = rec.slots[i];
      s.via = intern(s.via);
      if (s.compact()) s.to = vertex_id(sub_of.at(idx(s.to)));
      if (s.open()) sv.interior = false;
      sv.slots.push_back(s);
    }
    sub_vertices.push_back(std::move(sv));
  }
  // close the root set under negation
  for (std::size_t i = 0; i < original_root.size(); ++i)
    if (auto n = g.roots()[original_root[i]].neg) intern(*n);

  std::vector<RootEntry<B>> entries;
  for (std::size_t i = 0; i < original_root.size(); ++i) {
    const auto& parent = g.roots()[original_root[i]];
    const auto& c = in_span(original_root[i]);
    if (!c) throw Error(ErrorCode::AxiomViolation, "negated root escapes the span");
    RootEntry<B> e;
    e.id = root_id(i);
    e.ray = canonicalize<B>(*c);
    e.invertible = parent.invertible;
    if (parent.neg) e.neg = root_id(sub_root.at(idx(*parent.neg)));
    entries.push_back(std::move(e));
  }
  return SpanSubgraph<B>{MGraph<B>(k, RootTable<B>(std::move(entries)), std::move(sub_vertices), vertex_id(0)),
                         std::move(order), std::move(original_root)};
}

}  // namespace matsumoto
