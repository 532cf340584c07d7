#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "matsumoto/subgraph.hpp"

namespace matsumoto {

enum class Rank2Kind { Polygon, IDihedralWindow, TailWindow, SegmentWindow };

constexpr std::string_view to_string(Rank2Kind k) {
  switch (k) {
    case Rank2Kind::Polygon: return "polygon";
    case Rank2Kind::IDihedralWindow: return "idihedral-window";
    case Rank2Kind::TailWindow: return "tail-window";
    case Rank2Kind::SegmentWindow: return "segment-window";
  }
  return "?";
}

/// The rank-2 subgraph through an anchor vertex spanned by two roots.
/// For polygons, `cycle` lists the 2m vertices in walking order starting at
/// the anchor and `cycle_roots[i]` is the root of the arrow
/// cycle[i] -> cycle[i+1 mod 2m].
struct Rank2Cell {
  VertexId anchor{};
  RootId a{}, b{};
  Rank2Kind kind = Rank2Kind::Polygon;
  bool truncated = false;  // some vertex of the subgraph lies on the window boundary
  std::vector<VertexId> vertices;
  std::vector<VertexId> cycle;
  std::vector<RootId> cycle_roots;

  bool polygon() const { return kind == Rank2Kind::Polygon; }
  std::size_t half() const { return cycle.size() / 2; }

  std::optional<std::size_t> position(VertexId v) const {
    auto it = std::find(cycle.begin(), cycle.end(), v);
    if (it == cycle.end()) return std::nullopt;
    return static_cast<std::size_t>(it - cycle.begin());
  }
  VertexId antipode(VertexId v) const { return cycle[(*position(v) + half()) % cycle.size()]; }

  /// Path of `len` steps from cycle position `pos`, forwards or backwards.
  template <Backend B>
  Path walk(const MGraph<B>& g, std::size_t pos, bool forward, std::size_t len) const {
    const std::size_t n = cycle.size();
    Path p{cycle[pos], {}};
    for (std::size_t s = 0; s < len; ++s) {
      if (forward) {
        p.steps.push_back({cycle_roots[pos], cycle[(pos + 1) % n]});
        pos = (pos + 1) % n;
      } else {
        const std::size_t prev = (pos + n - 1) % n;
        p.steps.push_back({g.neg_or_self(cycle_roots[prev]), cycle[prev]});
        pos = prev;
      }
    }
    return p;
  }
};

namespace detail {

template <Backend B>
Rank2Cell classify_cell(const MGraph<B>& g, VertexId v, RootId a, RootId b, const std::vector<std::size_t>& slots) {
  auto sub = subgraph_span(g, v, slots);
  Rank2Cell cell;
  cell.anchor = v;
  cell.a = a;
  cell.b = b;
  cell.vertices = sub.original_vertex;
  std::size_t infinite = 0;
  for (const auto& sv : sub.graph.vertices()) {
    if (!sv.interior) cell.truncated = true;
    for (const auto& s : sv.slots)
      if (s.infinite()) ++infinite;
  }
  if (infinite == 0 && !cell.truncated) {
    cell.kind = Rank2Kind::Polygon;
    const auto& sg = sub.graph;
    VertexId cur = sg.base();
    std::optional<VertexId> prev;
    do {
      const auto& slots = sg.vertex(cur).slots;
      const Slot& next = (!prev || slots[0].to != *prev) ? slots[0] : slots[1];
      cell.cycle.push_back(sub.original_vertex[idx(cur)]);
      cell.cycle_roots.push_back(sub.original_root[idx(next.via)]);
      prev = cur;
      cur = next.to;
    } while (cur != sg.base() && cell.cycle.size() <= sg.vertex_count());
    if (cell.cycle.size() != sg.vertex_count())
      throw Error(ErrorCode::AxiomViolation, "rank-2 subgraph is not a single cycle");
    if (cell.cycle.size() % 2 != 0)
      throw Error(ErrorCode::AxiomViolation, "rank-2 polygon has an odd number of edges");
  } else if (infinite == 0) {
    cell.kind = Rank2Kind::IDihedralWindow;
  } else if (infinite == 1) {
    cell.kind = Rank2Kind::TailWindow;
  } else {
    cell.kind = Rank2Kind::SegmentWindow;
  }
  return cell;
}

}  // namespace detail

/// Rank-2 subgraph through v spanned by two independent roots.
template <Backend B>
Rank2Cell rank2_at(const MGraph<B>& g, VertexId v, RootId a, RootId b) {
  require_interior(g, v);
  std::vector<Vec<B>> gens{g.roots()[a].ray.dir, g.roots()[b].ray.dir};
  if (rank_of<B>(std::span<const Vec<B>>(gens)) != 2) throw Error(ErrorCode::BadRank2, "roots are not independent");
  std::vector<std::size_t> slots;
  const auto& basis = g.vertex(v).basis;
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (solve_in_span<B>(std::span<const Vec<B>>(gens), g.roots()[basis[i]].ray.dir).coefficients) slots.push_back(i);
  if (slots.size() != 2)
    throw Error(ErrorCode::BadRank2, "span meets the basis at vertex " + std::to_string(idx(v)) + " in " +
                                         std::to_string(slots.size()) + " roots");
  return detail::classify_cell(g, v, a, b, slots);
}

/// Every rank-2 cell through every interior vertex, indexed by (vertex,
/// slot pair). Built once; read-only afterwards.
template <Backend B>
class CellAtlas {
 public:
  explicit CellAtlas(const MGraph<B>& g) : g_(&g) {
    const std::size_t d = g.dim();
    for (const auto& v : g.vertices()) {
      if (!v.interior) continue;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
          if (index_.count(key(v.id, i, j))) continue;
          Rank2Cell cell = detail::classify_cell(g, v.id, v.basis[i], v.basis[j], {i, j});
          const std::size_t id = cells_.size();
          index_[key(v.id, i, j)] = id;
          if (cell.polygon()) register_polygon(cell, id);
          cells_.push_back(std::move(cell));
        }
    }
  }

  const MGraph<B>& graph() const { return *g_; }
  const std::vector<Rank2Cell>& cells() const { return cells_; }

  /// Cell at v spanned by the basis roots in slots i and j, if v is interior.
  const Rank2Cell* at(VertexId v, std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    auto it = index_.find(key(v, i, j));
    return it == index_.end() ? nullptr : &cells_[it->second];
  }

  /// Cell containing the consecutive arrows u --first--> w --second--> .
  const Rank2Cell* through(VertexId w, RootId first, RootId second) const {
    auto back = g_->slot_with_via(w, g_->neg_or_self(first));
    auto fwd = g_->slot_with_via(w, second);
    if (!back || !fwd || *back == *fwd) return nullptr;
    return at(w, *back, *fwd);
  }

 private:
  static std::uint64_t key(VertexId v, std::size_t i, std::size_t j) {
    return (static_cast<std::uint64_t>(idx(v)) << 16) | (i << 8) | j;
  }

  void register_polygon(const Rank2Cell& cell, std::size_t id) {
    const std::size_t n = cell.cycle.size();
    for (std::size_t p = 0; p < n; ++p) {
      const VertexId u = cell.cycle[p];
      auto fwd = g_->slot_with_via(u, cell.cycle_roots[p]);
      auto back = g_->slot_with_via(u, g_->neg_or_self(cell.cycle_roots[(p + n - 1) % n]));
      if (fwd && back) index_.try_emplace(key(u, std::min(*fwd, *back), std::max(*fwd, *back)), id);
    }
  }

  const MGraph<B>* g_;
  std::vector<Rank2Cell> cells_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Replace steps [pos, pos+m) by the other half of the polygon they bound.
struct BraidMove {
  std::size_t pos = 0;
  std::size_t m = 0;
  std::vector<RootId> replacement;
  friend bool operator==(const BraidMove&, const BraidMove&) = default;
};

struct Certificate {
  Path source;
  Path target;
  std::vector<BraidMove> moves;
};

namespace detail {

// The polygon half matching steps [pos, pos+m) and the opposite half, or
// none when the segment is not a polygon half.
template <Backend B>
std::optional<std::pair<Path, Path>> polygon_halves(const CellAtlas<B>& atlas, const Path& p, std::size_t pos) {
  if (pos + 2 > p.size()) return std::nullopt;
  const Rank2Cell* cell = atlas.through(p.vertex_at(pos + 1), p.root(pos), p.root(pos + 1));
  if (!cell || !cell->polygon()) return std::nullopt;
  const std::size_t m = cell->half();
  if (pos + m > p.size()) return std::nullopt;
  auto at = cell->position(p.vertex_at(pos));
  if (!at) return std::nullopt;
  const auto& g = atlas.graph();
  Path fwd = cell->walk(g, *at, true, m), bwd = cell->walk(g, *at, false, m);
  Path seg = p.slice(pos, pos + m);
  if (seg == fwd) return std::pair{fwd, bwd};
  if (seg == bwd) return std::pair{bwd, fwd};
  return std::nullopt;
}

inline Path splice(const Path& p, std::size_t pos, std::size_t m, const Path& replacement) {
  Path out{p.start, {}};
  out.steps.reserve(p.size());
  out.steps.insert(out.steps.end(), p.steps.begin(), p.steps.begin() + static_cast<std::ptrdiff_t>(pos));
  out.steps.insert(out.steps.end(), replacement.steps.begin(), replacement.steps.end());
  out.steps.insert(out.steps.end(), p.steps.begin() + static_cast<std::ptrdiff_t>(pos + m), p.steps.end());
  return out;
}

}  // namespace detail

/// Applies a braid move after checking it against the rank-2 cell it claims.
template <Backend B>
Path apply_move(const CellAtlas<B>& atlas, const Path& p, const BraidMove& mv) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidMove, "move at position " + std::to_string(mv.pos) + ": " + why);
  };
  if (mv.m < 2 || mv.pos + mv.m > p.size()) fail("segment out of range");
  if (mv.replacement.size() != mv.m) fail("replacement length differs from m");
  auto halves = detail::polygon_halves(atlas, p, mv.pos);
  if (!halves) fail("segment is not half of a polygon cell");
  if (halves->first.size() != mv.m) fail("polygon half length differs from m");
  if (halves->second.roots() != mv.replacement) fail("replacement is not the opposite polygon half");
  return detail::splice(p, mv.pos, mv.m, halves->second);
}

/// Every braid move applicable to p, by position.
template <Backend B>
std::vector<BraidMove> all_moves(const CellAtlas<B>& atlas, const Path& p) {
  std::vector<BraidMove> out;
  for (std::size_t pos = 0; pos + 1 < p.size(); ++pos)
    if (auto halves = detail::polygon_halves(atlas, p, pos))
      out.push_back({pos, halves->first.size(), halves->second.roots()});
  return out;
}

/// All shortest paths from `from` to `to`, by DFS that only steps to
/// vertices one unit geometrically closer. Slot order; at most `limit`.
template <Backend B>
std::vector<Path> shortest_paths(const MGraph<B>& g, VertexId from, VertexId to, std::size_t limit = SIZE_MAX) {
  require_interior(g, from);
  require_interior(g, to);
  std::vector<Path> out;
  Path cur{from, {}};
  std::function<void(VertexId, std::size_t)> dfs = [&](VertexId u, std::size_t remaining) {
    if (out.size() >= limit) return;
    if (remaining == 0) {
      if (u == to) out.push_back(cur);
      return;
    }
    for (const auto& s : g.vertex(u).slots) {
      if (!s.compact()) continue;
      if (detail::geometric_gap(g, to, s.to) != remaining - 1) continue;
      cur.steps.push_back({s.via, s.to});
      dfs(s.to, remaining - 1);
      cur.steps.pop_back();
    }
  };
  dfs(from, detail::geometric_gap(g, to, from));
  return out;
}

/// Closure of p under braid moves, sorted by root sequence.
template <Backend B>
std::vector<Path> braid_class(const CellAtlas<B>& atlas, const Path& p, std::size_t cap = 1'000'000) {
  std::map<std::vector<RootId>, Path> seen;
  std::vector<Path> frontier{p};
  seen.emplace(p.roots(), p);
  while (!frontier.empty()) {
    std::vector<Path> next;
    for (const auto& q : frontier)
      for (const auto& mv : all_moves(atlas, q)) {
        Path r = apply_move(atlas, q, mv);
        auto key = r.roots();
        if (seen.emplace(key, r).second) {
          if (seen.size() > cap) throw Error(ErrorCode::CapExceeded, "braid class exceeds " + std::to_string(cap));
          next.push_back(std::move(r));
        }
      }
    frontier = std::move(next);
  }
  std::vector<Path> out;
  out.reserve(seen.size());
  for (auto& [k, q] : seen) out.push_back(std::move(q));
  return out;
}

namespace detail {

template <Backend B>
class Transformer {
 public:
  explicit Transformer(const CellAtlas<B>& atlas) : atlas_(atlas), g_(atlas.graph()) {}

  // Moves turning a into b; a and b are shortest paths with equal ends.
  std::vector<BraidMove> run(const Path& a, const Path& b) {
    const std::size_t n = a.size();
    if (a.steps == b.steps) return {};
    if (n <= 1) throw Error(ErrorCode::AxiomViolation, "distinct shortest paths of length <= 1 (multiple edges)");

    if (a.root(0) == b.root(0)) return shifted(run(a.slice(1, n), b.slice(1, n)), 1);

    const auto i = find_root(a, b.root(0));
    if (i + 1 < n) {
      // b_1 followed by a shortest route to the end of a_i, then a's tail.
      Path gamma = greedy_shortest_path(g_, b.vertex_at(1), a.vertex_at(i + 1));
      if (gamma.size() != i) throw Error(ErrorCode::AxiomViolation, "distance to the matching vertex is not i-1");
      Path head = concat(b.slice(0, 1), gamma);
      auto moves = run(a.slice(0, i + 1), head);
      Path c = concat(head, a.slice(i + 1, n));
      auto rest = run(c, b);
      moves.insert(moves.end(), rest.begin(), rest.end());
      return moves;
    }
    const auto j = find_root(b, a.root(0));
    if (j + 1 < n) return reversed(b, run(b, a));

    // a ends with b's first root and b ends with a's first root: the cell
    // spanned by the two first arrows is a polygon leading to a common tail.
    const VertexId v = a.start, w = a.end();
    auto sa = g_.slot_with_via(v, a.root(0));
    auto sb = g_.slot_with_via(v, b.root(0));
    const Rank2Cell* cell = atlas_.at(v, *sa, *sb);
    if (!cell) throw Error(ErrorCode::OutOfWindow, "rank-2 cell at a boundary vertex");
    if (!cell->polygon()) {
      if (cell->truncated) throw Error(ErrorCode::OutOfWindow, "rank-2 cell escapes the window");
      throw Error(ErrorCode::AxiomViolation, "rank-2 cell between the first arrows is not a polygon");
    }
    const VertexId opp = cell->antipode(v);
    const std::size_t m = cell->half();
    if (geometric_gap(g_, v, w) != geometric_gap(g_, v, opp) + geometric_gap(g_, opp, w))
      throw Error(ErrorCode::AxiomViolation, "distance through the antipode is not additive");
    const Path gamma = greedy_shortest_path(g_, opp, w);
    const std::size_t pos = *cell->position(v);
    Path first = cell->walk(g_, pos, true, m), second = cell->walk(g_, pos, false, m);
    if (first.root(0) != a.root(0)) std::swap(first, second);
    const Path via_a = concat(first, gamma), via_b = concat(second, gamma);
    auto moves = run(a, via_a);
    moves.push_back({0, m, second.roots()});
    auto rest = run(via_b, b);
    moves.insert(moves.end(), rest.begin(), rest.end());
    return moves;
  }

  // Moves turning the end of `moves` applied to `source` back into `source`.
  std::vector<BraidMove> reversed(const Path& source, const std::vector<BraidMove>& moves) {
    std::vector<Path> states{source};
    for (const auto& mv : moves) states.push_back(apply_unchecked(states.back(), mv));
    std::vector<BraidMove> out;
    out.reserve(moves.size());
    for (std::size_t t = moves.size(); t-- > 0;) {
      const auto& mv = moves[t];
      out.push_back({mv.pos, mv.m, states[t].slice(mv.pos, mv.pos + mv.m).roots()});
    }
    return out;
  }

 private:
  static std::vector<BraidMove> shifted(std::vector<BraidMove> moves, std::size_t by) {
    for (auto& mv : moves) mv.pos += by;
    return moves;
  }

  static std::size_t find_root(const Path& p, RootId r) {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p.root(i) == r) return i;
    throw Error(ErrorCode::AxiomViolation, "shortest paths with equal ends cross different roots");
  }

  Path apply_unchecked(const Path& p, const BraidMove& mv) const {
    Path rep = path_from_roots(g_, p.vertex_at(mv.pos), mv.replacement);
    return splice(p, mv.pos, mv.m, rep);
  }

  const CellAtlas<B>& atlas_;
  const MGraph<B>& g_;
};

}  // namespace detail

/// Braid-move certificate turning shortest path a into shortest path b.
template <Backend B>
Certificate matsumoto_transform(const CellAtlas<B>& atlas, const Path& a, const Path& b) {
  const auto& g = atlas.graph();
  if (!is_valid_path(g, a) || !is_valid_path(g, b)) throw Error(ErrorCode::BadPath, "input is not a path of the graph");
  if (a.start != b.start || a.end() != b.end() || a.size() != b.size())
    throw Error(ErrorCode::NotShortestPair, "paths differ in endpoints or length");
  require_interior(g, a.start);
  require_interior(g, a.end());
  if (a.size() != distance_geometric(g, a.start, a.end()))
    throw Error(ErrorCode::NotShortestPair, "paths are not shortest");
  detail::Transformer<B> t(atlas);
  return {a, b, t.run(a, b)};
}

struct VerifyResult {
  bool ok = false;
  std::optional<std::size_t> failed_move;  // equals moves.size() when only the final comparison fails
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// Replays the certificate with full move validation.
template <Backend B>
VerifyResult verify_certificate(const CellAtlas<B>& atlas, const Certificate& c) {
  const auto& g = atlas.graph();
  if (!is_valid_path(g, c.source)) return {false, 0, "source is not a path"};
  if (!is_valid_path(g, c.target)) return {false, c.moves.size(), "target is not a path"};
  Path cur = c.source;
  for (std::size_t i = 0; i < c.moves.size(); ++i) {
    try {
      Path next = apply_move(atlas, cur, c.moves[i]);
      if (next.start != cur.start || next.end() != cur.end() || next.size() != cur.size())
        return {false, i, "move changes endpoints or length"};
      cur = std::move(next);
    } catch (const Error& e) {
      return {false, i, e.what()};
    }
  }
  if (cur != c.target) return {false, c.moves.size(), "final path differs from the declared target"};
  return {true, std::nullopt, {}};
}

}  // namespace matsumoto
