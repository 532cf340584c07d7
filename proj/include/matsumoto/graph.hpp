#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "matsumoto/ray.hpp"

namespace matsumoto {

enum class RootId : std::uint32_t {};
enum class VertexId : std::uint32_t {};

constexpr std::size_t idx(RootId r) { return static_cast<std::size_t>(r); }
constexpr std::size_t idx(VertexId v) { return static_cast<std::size_t>(v); }
constexpr RootId root_id(std::size_t i) { return static_cast<RootId>(i); }
constexpr VertexId vertex_id(std::size_t i) { return static_cast<VertexId>(i); }

template <Backend B>
struct RootEntry {
  RootId id{};
  Ray<B> ray;
  bool invertible = false;
  std::optional<RootId> neg;
};

/// The set R of roots. Lookup by ray key returns the first entry carrying it;
/// duplicated keys are tolerated here and reported by the axiom checker.
template <Backend B>
class RootTable {
 public:
  RootTable() = default;
  explicit RootTable(std::vector<RootEntry<B>> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) by_key_.try_emplace(entries_[i].ray.key, root_id(i));
  }

  std::size_t size() const { return entries_.size(); }
  const RootEntry<B>& operator[](RootId id) const { return entries_.at(idx(id)); }
  const std::vector<RootEntry<B>>& entries() const { return entries_; }

  std::optional<RootId> find(const RayKey& key) const {
    auto it = by_key_.find(key);
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<RootEntry<B>> entries_;
  std::unordered_map<RayKey, RootId> by_key_;
};

/// One edge end at a vertex. `via` is the root of the arrow leaving the
/// vertex along a compact edge, or the root of an infinite (incoming) edge.
/// Open slots are compact edges whose far end lies outside the window.
struct Slot {
  enum class Kind { Compact, Infinite, Open };
  Kind kind = Kind::Open;
  RootId via{};
  VertexId to{};

  bool compact() const { return kind == Kind::Compact; }
  bool infinite() const { return kind == Kind::Infinite; }
  bool open() const { return kind == Kind::Open; }
};

/// Dense bitset over root ids.
class RootSet {
 public:
  RootSet() = default;
  explicit RootSet(std::size_t n) : bits_((n + 63) / 64, 0), n_(n) {}

  void insert(RootId r) { bits_[idx(r) / 64] |= (std::uint64_t{1} << (idx(r) % 64)); }
  bool contains(RootId r) const {
    return idx(r) < n_ && ((bits_[idx(r) / 64] >> (idx(r) % 64)) & 1U);
  }
  std::size_t count_not_in(const RootSet& other) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i)
      c += static_cast<std::size_t>(__builtin_popcountll(bits_[i] & ~other.bits_[i]));
    return c;
  }
  std::vector<RootId> to_vector() const {
    std::vector<RootId> out;
    for (std::size_t i = 0; i < n_; ++i)
      if (contains(root_id(i))) out.push_back(root_id(i));
    return out;
  }
  friend bool operator==(const RootSet&, const RootSet&) = default;
  friend auto operator<=>(const RootSet& a, const RootSet& b) { return a.bits_ <=> b.bits_; }

 private:
  std::vector<std::uint64_t> bits_;
  std::size_t n_ = 0;
};

struct VertexRecord {
  VertexId id{};
  std::vector<RootId> basis;   // roots of the d incoming oriented edges
  std::vector<Slot> slots;     // slot i is the edge whose incoming root is basis[i]
  bool interior = false;
  std::vector<RootId> inversion;  // sorted; maintained incrementally from the base
};

/// A walk along compact edges.
struct Step {
  RootId via{};
  VertexId to{};
  friend bool operator==(const Step&, const Step&) = default;
};

struct Path {
  VertexId start{};
  std::vector<Step> steps;

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
  VertexId end() const { return steps.empty() ? start : steps.back().to; }
  VertexId vertex_at(std::size_t i) const { return i == 0 ? start : steps[i - 1].to; }
  RootId root(std::size_t i) const { return steps[i].via; }
  std::vector<RootId> roots() const {
    std::vector<RootId> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.via);
    return out;
  }
  /// Steps [from, to) as a path starting at vertex_at(from).
  Path slice(std::size_t from, std::size_t to) const {
    Path p{vertex_at(from), {}};
    p.steps.assign(steps.begin() + static_cast<std::ptrdiff_t>(from), steps.begin() + static_cast<std::ptrdiff_t>(to));
    return p;
  }
  Path& append(const Path& tail) {
    steps.insert(steps.end(), tail.steps.begin(), tail.steps.end());
    return *this;
  }
  friend bool operator==(const Path&, const Path&) = default;
};

inline Path concat(Path a, const Path& b) {
  a.append(b);
  return a;
}

/// A connected graph with a ray realization, materialized on a window.
/// Immutable after construction. The constructor checks structural
/// well-formedness only; the realization axioms are checked by
/// check_axioms.
template <Backend B>
class MGraph {
 public:
  using backend_type = B;

  MGraph(std::size_t dim, RootTable<B> roots, std::vector<VertexRecord> vertices, VertexId base)
      : dim_(dim), roots_(std::move(roots)), vertices_(std::move(vertices)), base_(base) {
    validate_structure();
    compute_inversions();
    compute_positive_systems();
  }

  std::size_t dim() const { return dim_; }
  const RootTable<B>& roots() const { return roots_; }
  const std::vector<VertexRecord>& vertices() const { return vertices_; }
  const VertexRecord& vertex(VertexId v) const { return vertices_.at(idx(v)); }
  std::size_t vertex_count() const { return vertices_.size(); }
  VertexId base() const { return base_; }
  bool all_interior() const {
    return std::all_of(vertices_.begin(), vertices_.end(), [](const auto& v) { return v.interior; });
  }

  SimplicialCone<B> basis_cone(VertexId v) const {
    SimplicialCone<B> c;
    for (RootId r : vertex(v).basis) c.gens.push_back(roots_[r].ray);
    return c;
  }

  bool basis_independent(VertexId v) const { return independent_.at(idx(v)); }

  /// Table roots in the cone of the basis at v (any materialized vertex).
  const RootSet& positive_set(VertexId v) const { return positive_.at(idx(v)); }

  std::optional<std::size_t> slot_with_via(VertexId v, RootId via) const {
    const auto& slots = vertex(v).slots;
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (slots[i].via == via) return i;
    return std::nullopt;
  }

  RootId neg_or_self(RootId r) const { return roots_[r].neg.value_or(r); }

 private:
  void fail(const std::string& msg) const { throw Error(ErrorCode::MalformedGraph, msg); }

  void validate_structure() const {
    if (dim_ == 0) fail("dimension must be positive");
    if (vertices_.empty()) fail("graph has no vertices");
    if (idx(base_) >= vertices_.size()) fail("base vertex out of range");
    for (std::size_t i = 0; i < roots_.size(); ++i) {
      const auto& e = roots_.entries()[i];
      if (idx(e.id) != i) fail("root ids must be 0..n-1 in order");
      if (e.ray.dim() != dim_) fail("root " + std::to_string(i) + " has wrong dimension");
      if (e.neg && idx(*e.neg) >= roots_.size()) fail("root " + std::to_string(i) + " has dangling neg");
    }
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const auto& v = vertices_[i];
      const std::string where = "vertex " + std::to_string(i);
      if (idx(v.id) != i) fail("vertex ids must be 0..n-1 in order");
      if (v.basis.size() != dim_ || v.slots.size() != dim_) fail(where + " must have exactly d basis roots and slots");
      for (RootId r : v.basis)
        if (idx(r) >= roots_.size()) fail(where + " basis references unknown root");
      for (const auto& s : v.slots) {
        if (idx(s.via) >= roots_.size()) fail(where + " slot references unknown root");
        if (s.compact()) {
          if (idx(s.to) >= vertices_.size()) fail(where + " slot points to unknown vertex");
          if (idx(s.to) == i) fail(where + " has a loop");
          const auto& w = vertices_[idx(s.to)];
          bool back = false;
          for (const auto& t : w.slots)
            if (t.compact() && t.to == v.id && roots_[s.via].neg && t.via == *roots_[s.via].neg) back = true;
          if (!back) fail(where + " compact slot has no reverse slot carrying the negated root");
        }
      }
      if (v.interior)
        for (const auto& s : v.slots)
          if (s.open()) fail(where + " is marked interior but has an open slot");
    }
    // connectivity over compact edges
    std::vector<char> seen(vertices_.size(), 0);
    std::deque<std::size_t> q{idx(base_)};
    seen[idx(base_)] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
      auto u = q.front();
      q.pop_front();
      for (const auto& s : vertices_[u].slots)
        if (s.compact() && !seen[idx(s.to)]) {
          seen[idx(s.to)] = 1;
          ++count;
          q.push_back(idx(s.to));
        }
    }
    if (count != vertices_.size()) fail("graph is not connected over compact edges");
  }

  // BFS from the base: crossing an arrow with root a removes neg(a) from the
  // inversion set if present, otherwise inserts a.
  void compute_inversions() {
    std::vector<char> seen(vertices_.size(), 0);
    std::deque<std::size_t> q{idx(base_)};
    seen[idx(base_)] = 1;
    vertices_[idx(base_)].inversion.clear();
    while (!q.empty()) {
      auto u = q.front();
      q.pop_front();
      for (const auto& s : vertices_[u].slots) {
        if (!s.compact() || seen[idx(s.to)]) continue;
        auto inv = vertices_[u].inversion;
        const RootId n = neg_or_self(s.via);
        auto it = std::find(inv.begin(), inv.end(), n);
        if (n != s.via && it != inv.end()) inv.erase(it);
        else inv.insert(std::lower_bound(inv.begin(), inv.end(), s.via), s.via);
        vertices_[idx(s.to)].inversion = std::move(inv);
        seen[idx(s.to)] = 1;
        q.push_back(idx(s.to));
      }
    }
  }

  void compute_positive_systems() {
    independent_.assign(vertices_.size(), false);
    positive_.assign(vertices_.size(), RootSet(roots_.size()));
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const auto cone = basis_cone(vertex_id(i));
      const auto gens = cone.generator_vectors();
      if (rank_of<B>(std::span<const Vec<B>>(gens)) != dim_) continue;
      independent_[i] = true;
      for (const auto& e : roots_.entries())
        if (in_cone(cone, e.ray)) positive_[i].insert(e.id);
    }
  }

  std::size_t dim_;
  RootTable<B> roots_;
  std::vector<VertexRecord> vertices_;
  VertexId base_;
  std::vector<bool> independent_;
  std::vector<RootSet> positive_;
};

using AnyGraph = std::variant<MGraph<Exact>, MGraph<Float>>;

// ---------------------------------------------------------------------------
// Queries

template <Backend B>
void require_interior(const MGraph<B>& g, VertexId v) {
  if (idx(v) >= g.vertex_count()) throw Error(ErrorCode::OutOfWindow, "unknown vertex " + std::to_string(idx(v)));
  if (!g.vertex(v).interior)
    throw Error(ErrorCode::BoundaryVertex, "vertex " + std::to_string(idx(v)) + " lies on the window boundary");
}

/// R+_v: every table root in the cone spanned by the basis at v.
template <Backend B>
std::vector<RootId> positive_roots(const MGraph<B>& g, VertexId v) {
  require_interior(g, v);
  if (!g.basis_independent(v))
    throw Error(ErrorCode::AxiomViolation, "basis at vertex " + std::to_string(idx(v)) + " is not independent");
  return g.positive_set(v).to_vector();
}

/// Shortest-path length over compact edges of the window.
template <Backend B>
std::size_t distance(const MGraph<B>& g, VertexId from, VertexId to) {
  if (idx(from) >= g.vertex_count() || idx(to) >= g.vertex_count())
    throw Error(ErrorCode::OutOfWindow, "unknown vertex");
  std::vector<std::size_t> dist(g.vertex_count(), SIZE_MAX);
  std::deque<VertexId> q{from};
  dist[idx(from)] = 0;
  while (!q.empty()) {
    auto u = q.front();
    q.pop_front();
    if (u == to) return dist[idx(u)];
    for (const auto& s : g.vertex(u).slots)
      if (s.compact() && dist[idx(s.to)] == SIZE_MAX) {
        dist[idx(s.to)] = dist[idx(u)] + 1;
        q.push_back(s.to);
      }
  }
  throw Error(ErrorCode::OutOfWindow, "target not reachable inside the window");
}

/// |R+_to \ R+_from| over the root table.
template <Backend B>
std::size_t distance_geometric(const MGraph<B>& g, VertexId from, VertexId to) {
  require_interior(g, from);
  require_interior(g, to);
  return g.positive_set(to).count_not_in(g.positive_set(from));
}

namespace detail {
template <Backend B>
std::size_t geometric_gap(const MGraph<B>& g, VertexId from, VertexId to) {
  return g.positive_set(to).count_not_in(g.positive_set(from));
}
}  // namespace detail

/// Walks from `from` to `to`, always crossing the lowest slot whose arrow
/// root is positive at the target.
template <Backend B>
Path greedy_shortest_path(const MGraph<B>& g, VertexId from, VertexId to) {
  if (idx(from) >= g.vertex_count() || idx(to) >= g.vertex_count())
    throw Error(ErrorCode::OutOfWindow, "unknown vertex");
  const RootSet& target = g.positive_set(to);
  Path p{from, {}};
  VertexId u = from;
  const std::size_t budget = detail::geometric_gap(g, from, to);
  while (u != to) {
    if (p.size() >= budget)
      throw Error(ErrorCode::AxiomViolation, "greedy walk did not reach the target within the geometric distance");
    const auto& slots = g.vertex(u).slots;
    std::optional<std::size_t> chosen;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i].infinite()) continue;
      if (target.contains(slots[i].via)) { chosen = i; break; }
    }
    if (!chosen)
      throw Error(ErrorCode::AxiomViolation, "no admissible edge at vertex " + std::to_string(idx(u)));
    const Slot& s = slots[*chosen];
    if (s.open()) throw Error(ErrorCode::OutOfWindow, "greedy walk leaves the window at vertex " + std::to_string(idx(u)));
    p.steps.push_back({s.via, s.to});
    u = s.to;
  }
  return p;
}

/// Two-colorability of the vertices over compact edges.
template <Backend B>
bool bipartite_check(const MGraph<B>& g) {
  std::vector<int> side(g.vertex_count(), -1);
  for (std::size_t start = 0; start < g.vertex_count(); ++start) {
    if (side[start] >= 0) continue;
    side[start] = 0;
    std::deque<std::size_t> q{start};
    while (!q.empty()) {
      auto u = q.front();
      q.pop_front();
      for (const auto& s : g.vertex(vertex_id(u)).slots) {
        if (!s.compact()) continue;
        auto w = idx(s.to);
        if (side[w] < 0) {
          side[w] = 1 - side[u];
          q.push_back(w);
        } else if (side[w] == side[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

/// Builds a path from a start vertex and a root sequence.
template <Backend B>
Path path_from_roots(const MGraph<B>& g, VertexId start, const std::vector<RootId>& roots) {
  if (idx(start) >= g.vertex_count()) throw Error(ErrorCode::BadPath, "unknown start vertex");
  Path p{start, {}};
  VertexId u = start;
  for (RootId r : roots) {
    auto slot = g.slot_with_via(u, r);
    if (!slot || !g.vertex(u).slots[*slot].compact())
      throw Error(ErrorCode::BadPath, "no compact edge with root " + std::to_string(idx(r)) + " at vertex " +
                                          std::to_string(idx(u)));
    u = g.vertex(u).slots[*slot].to;
    p.steps.push_back({r, u});
  }
  return p;
}

template <Backend B>
bool is_valid_path(const MGraph<B>& g, const Path& p) {
  if (idx(p.start) >= g.vertex_count()) return false;
  VertexId u = p.start;
  for (const auto& st : p.steps) {
    auto slot = g.slot_with_via(u, st.via);
    if (!slot) return false;
    const auto& s = g.vertex(u).slots[*slot];
    if (!s.compact() || s.to != st.to) return false;
    u = st.to;
  }
  return true;
}

}  // namespace matsumoto
