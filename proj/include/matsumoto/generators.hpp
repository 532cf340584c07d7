#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "matsumoto/graph.hpp"

namespace matsumoto {

struct CoxeterMatrix {
  static constexpr int kInfinity = std::numeric_limits<int>::max();

  std::size_t n = 0;
  std::vector<std::vector<int>> m;

  /// Entries as read from files, where 0 stands for infinity.
  static CoxeterMatrix from_entries(const std::vector<std::vector<int>>& entries) {
    CoxeterMatrix c;
    c.n = entries.size();
    c.m = entries;
    for (auto& row : c.m)
      for (auto& x : row)
        if (x == 0) x = kInfinity;
    c.validate();
    return c;
  }

  /// I2(m); pass kInfinity for the infinite dihedral group.
  static CoxeterMatrix dihedral(int order) { return from_entries({{1, order == kInfinity ? 0 : order}, {order == kInfinity ? 0 : order, 1}}); }

  /// n generators, all pairs commuting.
  static CoxeterMatrix commuting(std::size_t n) {
    std::vector<std::vector<int>> e(n, std::vector<int>(n, 2));
    for (std::size_t i = 0; i < n; ++i) e[i][i] = 1;
    return from_entries(e);
  }

  void validate() const {
    auto bad = [](const std::string& why) { throw Error(ErrorCode::BadCoxeterMatrix, why); };
    if (n == 0) bad("empty matrix");
    if (m.size() != n) bad("row count differs from n");
    for (std::size_t s = 0; s < n; ++s) {
      if (m[s].size() != n) bad("matrix is not square");
      if (m[s][s] != 1) bad("diagonal entries must be 1");
      for (std::size_t t = 0; t < n; ++t) {
        if (m[s][t] != m[t][s]) bad("matrix is not symmetric");
        if (s != t && m[s][t] < 2) bad("off-diagonal entries must be >= 2 or infinity");
      }
    }
  }
};

struct CartanMatrix {
  std::size_t n = 0;
  std::vector<std::vector<long>> a;

  static CartanMatrix from_entries(const std::vector<std::vector<long>>& entries) {
    CartanMatrix c{entries.size(), entries};
    c.validate();
    return c;
  }

  void validate() const {
    auto bad = [](const std::string& why) { throw Error(ErrorCode::BadCartanMatrix, why); };
    if (n == 0) bad("empty matrix");
    if (a.size() != n) bad("row count differs from n");
    for (std::size_t s = 0; s < n; ++s) {
      if (a[s].size() != n) bad("matrix is not square");
      if (a[s][s] != 2) bad("diagonal entries must be 2");
      for (std::size_t t = 0; t < n; ++t) {
        if (s == t) continue;
        if (a[s][t] > 0) bad("off-diagonal entries must be <= 0");
        if ((a[s][t] == 0) != (a[t][s] == 0)) bad("a_st = 0 must coincide with a_ts = 0");
      }
    }
  }
};

namespace detail {

// -cos(pi/m), exact where the value is rational, for the Exact backend
// only those.
template <Backend B>
typename B::Scalar coxeter_form(int m) {
  using S = typename B::Scalar;
  if constexpr (std::is_same_v<B, Exact>) {
    switch (m) {
      case 1: return S(-1);
      case 2: return S(0);
      case 3: return S(-1, 2);
      case CoxeterMatrix::kInfinity: return S(-1);
      default:
        throw Error(ErrorCode::BadCoxeterMatrix,
                    "cos(pi/" + std::to_string(m) + ") is irrational; use the float backend");
    }
  } else {
    switch (m) {
      case 1: return -1.0;
      case 2: return 0.0;
      case 3: return -0.5;
      case 4: return -std::numbers::sqrt2 / 2.0;
      case 6: return -std::numbers::sqrt3 / 2.0;
      case CoxeterMatrix::kInfinity: return -1.0;
      default: return -std::cos(std::numbers::pi / m);
    }
  }
}

}  // namespace detail

/// Reflection matrices of the geometric representation in the basis of
/// simple roots: sigma_s(v) = v - 2 B(alpha_s, v) alpha_s with
/// B(alpha_s, alpha_t) = -cos(pi / m_st).
template <Backend B = Float>
std::vector<Matrix<B>> geometric_rep(const CoxeterMatrix& cm) {
  cm.validate();
  const std::size_t n = cm.n;
  std::vector<Matrix<B>> out;
  for (std::size_t s = 0; s < n; ++s) {
    Matrix<B> sigma = identity_matrix<B>(n);
    for (std::size_t t = 0; t < n; ++t) {
      const auto form = s == t ? typename B::Scalar(1) : detail::coxeter_form<B>(cm.m[s][t]);
      sigma[s][t] -= 2 * form;
    }
    out.push_back(std::move(sigma));
  }
  return out;
}

/// Simple reflections of a Cartan matrix acting on root coordinates:
/// s_i(alpha_j) = alpha_j - a_ij alpha_i.
inline std::vector<Matrix<Exact>> weyl_rep(const CartanMatrix& c) {
  c.validate();
  std::vector<Matrix<Exact>> out;
  for (std::size_t i = 0; i < c.n; ++i) {
    Matrix<Exact> s = identity_matrix<Exact>(c.n);
    for (std::size_t j = 0; j < c.n; ++j) s[i][j] -= c.a[i][j];
    out.push_back(std::move(s));
  }
  return out;
}

/// Generated graph plus the group word of each vertex (shortlex-first word).
template <Backend B>
struct CayleyGraph {
  MGraph<B> graph;
  std::vector<std::vector<std::size_t>> words;
};

/// Cayley graph of the group generated by the given reflections, windowed
/// to words of length <= radius. The arrow g -> g x carries the ray of
/// M_g alpha_x; the basis at g is {-M_g alpha_x}. Vertices are deduplicated
/// by their inversion sets (keys of the roots gained from the identity).
template <Backend B>
CayleyGraph<B> build_from_reflections(const std::vector<Matrix<B>>& reflections, std::size_t radius) {
  const std::size_t n = reflections.size();
  struct Node {
    Matrix<B> m;
    std::vector<std::size_t> word;
    std::set<RayKey> inversion;
    std::vector<Ray<B>> arrows;  // canonical M_g alpha_x
    std::vector<std::optional<std::size_t>> to;
  };
  auto arrows_of = [&](const Matrix<B>& m) {
    std::vector<Ray<B>> a;
    for (std::size_t x = 0; x < n; ++x) a.push_back(canonicalize<B>(column<B>(m, x)));
    return a;
  };
  auto key_of = [](const std::set<RayKey>& inv) {
    std::string k;
    for (const auto& r : inv) k += r + ';';
    return k;
  };

  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> by_inversion;
  {
    Node e{identity_matrix<B>(n), {}, {}, {}, std::vector<std::optional<std::size_t>>(n)};
    e.arrows = arrows_of(e.m);
    by_inversion[key_of(e.inversion)] = 0;
    nodes.push_back(std::move(e));
  }
  for (std::size_t cur = 0; cur < nodes.size(); ++cur) {
    if (nodes[cur].word.size() >= radius) continue;
    for (std::size_t x = 0; x < n; ++x) {
      if (nodes[cur].to[x]) continue;
      const Ray<B>& a = nodes[cur].arrows[x];
      auto inv = nodes[cur].inversion;
      const RayKey back = opposite(a).key;
      if (!inv.erase(back)) inv.insert(a.key);
      const std::string key = key_of(inv);
      Matrix<B> next = multiply<B>(nodes[cur].m, reflections[x]);
      std::size_t target;
      if (auto it = by_inversion.find(key); it != by_inversion.end()) {
        target = it->second;
        const auto expected = arrows_of(next);
        for (std::size_t y = 0; y < n; ++y)
          if (expected[y].key != nodes[target].arrows[y].key)
            throw Error(ErrorCode::KeyCollision, "distinct elements share inversion key (vertex " +
                                                     std::to_string(target) + ", generator " + std::to_string(x) + ")");
      } else {
        target = nodes.size();
        by_inversion.emplace(key, target);
        Node nn{std::move(next), nodes[cur].word, std::move(inv), {}, std::vector<std::optional<std::size_t>>(n)};
        nn.word.push_back(x);
        nn.arrows = arrows_of(nn.m);
        nodes.push_back(std::move(nn));
      }
      nodes[cur].to[x] = target;
      if (nodes[target].to[x] && *nodes[target].to[x] != cur)
        throw Error(ErrorCode::KeyCollision, "inconsistent edge for generator " + std::to_string(x));
      nodes[target].to[x] = cur;
    }
  }

  // Root table in order of first appearance: basis root, then arrow root.
  std::vector<RootEntry<B>> entries;
  std::unordered_map<RayKey, std::size_t> id_of;
  auto intern = [&](const Ray<B>& r) {
    auto [it, fresh] = id_of.emplace(r.key, entries.size());
    if (fresh) entries.push_back({root_id(entries.size()), r, true, std::nullopt});
    return root_id(it->second);
  };
  std::vector<VertexRecord> verts;
  std::vector<std::vector<std::size_t>> words;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    VertexRecord v;
    v.id = vertex_id(i);
    v.interior = true;
    for (std::size_t x = 0; x < n; ++x) {
      const Ray<B>& a = nodes[i].arrows[x];
      const RootId basis = intern(opposite(a));
      const RootId via = intern(a);
      v.basis.push_back(basis);
      Slot s;
      s.via = via;
      if (nodes[i].to[x]) {
        s.kind = Slot::Kind::Compact;
        s.to = vertex_id(*nodes[i].to[x]);
      } else {
        s.kind = Slot::Kind::Open;
        v.interior = false;
      }
      v.slots.push_back(s);
    }
    verts.push_back(std::move(v));
    words.push_back(nodes[i].word);
  }
  for (auto& e : entries) e.neg = root_id(id_of.at(opposite(e.ray).key));
  return {MGraph<B>(n, RootTable<B>(std::move(entries)), std::move(verts), vertex_id(0)), std::move(words)};
}

template <Backend B = Float>
CayleyGraph<B> build_cayley(const CoxeterMatrix& m, std::size_t radius) {
  return build_from_reflections<B>(geometric_rep<B>(m), radius);
}

inline CayleyGraph<Exact> build_weyl(const CartanMatrix& c, std::size_t radius) {
  return build_from_reflections<Exact>(weyl_rep(c), radius);
}

// ---------------------------------------------------------------------------
// Rank two

/// 2m-gon: the Cayley graph of I2(m).
inline MGraph<Float> build_polygon(int m) {
  if (m < 2) throw Error(ErrorCode::BadCoxeterMatrix, "polygon needs m >= 2");
  return build_cayley<Float>(CoxeterMatrix::dihedral(m), static_cast<std::size_t>(m) + 1).graph;
}

/// Polygon given by its total number of edges, which must be even.
inline MGraph<Float> build_polygon_with_edges(int edges) {
  if (edges % 2 != 0)
    throw Error(ErrorCode::OddPolygon, std::to_string(edges) + "-gon is not bipartite and has no realization");
  return build_polygon(edges / 2);
}

inline MGraph<Float> build_idihedral(std::size_t radius) {
  return build_cayley<Float>(CoxeterMatrix::dihedral(CoxeterMatrix::kInfinity), radius).graph;
}

namespace detail {

template <Backend B>
struct PlanarBuilder {
  std::vector<RootEntry<B>> entries;
  std::unordered_map<RayKey, std::size_t> id_of;

  RootId add(const Vec<B>& v, bool invertible) {
    Ray<B> r = canonicalize<B>(v);
    auto [it, fresh] = id_of.emplace(r.key, entries.size());
    if (fresh) entries.push_back({root_id(entries.size()), r, invertible, std::nullopt});
    return root_id(it->second);
  }
  // Adds the pair +-v and links them.
  std::pair<RootId, RootId> add_pair(const Vec<B>& v) {
    RootId p = add(v, true), n = add(negated<B>(v), true);
    entries[idx(p)].neg = n;
    entries[idx(n)].neg = p;
    return {p, n};
  }
};

inline Vec<Float> at_angle(double degrees) {
  const double t = degrees * std::numbers::pi / 180.0;
  return {std::cos(t), std::sin(t)};
}

}  // namespace detail

/// Two infinite edges joined by k compact edges. With eps = 80/k degrees
/// the compact roots gamma_i sit at -i*eps, the noninvertible roots at 90
/// and 91 degrees; vertex v_i has basis {gamma_i, -gamma_{i+1}} with the
/// ends closed off by the infinite edges.
inline MGraph<Float> build_segment(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::DimError, "segment needs at least one compact edge");
  detail::PlanarBuilder<Float> pb;
  const double eps = 80.0 / static_cast<double>(k);
  const RootId delta0 = pb.add(detail::at_angle(90.0), false);
  const RootId deltak = pb.add(detail::at_angle(91.0), false);
  std::vector<std::pair<RootId, RootId>> gamma(k + 1);
  for (std::size_t i = 1; i <= k; ++i) gamma[i] = pb.add_pair(detail::at_angle(-static_cast<double>(i) * eps));

  std::vector<VertexRecord> verts(k + 1);
  for (std::size_t i = 0; i <= k; ++i) {
    auto& v = verts[i];
    v.id = vertex_id(i);
    v.interior = true;
    if (i == 0) {
      v.basis.push_back(delta0);
      v.slots.push_back({Slot::Kind::Infinite, delta0, {}});
    } else {
      v.basis.push_back(gamma[i].first);
      v.slots.push_back({Slot::Kind::Compact, gamma[i].second, vertex_id(i - 1)});
    }
    if (i == k) {
      v.basis.push_back(deltak);
      v.slots.push_back({Slot::Kind::Infinite, deltak, {}});
    } else {
      v.basis.push_back(gamma[i + 1].second);
      v.slots.push_back({Slot::Kind::Compact, gamma[i + 1].first, vertex_id(i + 1)});
    }
  }
  return MGraph<Float>(2, RootTable<Float>(std::move(pb.entries)), std::move(verts), vertex_id(0));
}

/// One infinite edge followed by an unbounded chain of compact edges,
/// windowed to vertices v_0..v_radius. Exact: delta = (0,1) and
/// gamma_i = (1, 1-i), so the compact roots accumulate like those of the
/// infinite dihedral group.
inline MGraph<Exact> build_tail(std::size_t radius) {
  detail::PlanarBuilder<Exact> pb;
  const RootId delta = pb.add({mpq_class(0), mpq_class(1)}, false);
  std::vector<std::pair<RootId, RootId>> gamma(radius + 2);
  for (std::size_t i = 1; i <= radius + 1; ++i)
    gamma[i] = pb.add_pair({mpq_class(1), mpq_class(1 - static_cast<long>(i))});

  std::vector<VertexRecord> verts(radius + 1);
  for (std::size_t i = 0; i <= radius; ++i) {
    auto& v = verts[i];
    v.id = vertex_id(i);
    if (i == 0) {
      v.basis.push_back(delta);
      v.slots.push_back({Slot::Kind::Infinite, delta, {}});
    } else {
      v.basis.push_back(gamma[i].first);
      v.slots.push_back({Slot::Kind::Compact, gamma[i].second, vertex_id(i - 1)});
    }
    v.basis.push_back(gamma[i + 1].second);
    if (i < radius) {
      v.slots.push_back({Slot::Kind::Compact, gamma[i + 1].first, vertex_id(i + 1)});
      v.interior = true;
    } else {
      v.slots.push_back({Slot::Kind::Open, gamma[i + 1].first, {}});
      v.interior = false;
    }
  }
  return MGraph<Exact>(2, RootTable<Exact>(std::move(pb.entries)), std::move(verts), vertex_id(0));
}

}  // namespace matsumoto
