#pragma once

#include <map>
#include <string>
#include <vector>

#include "matsumoto/graph.hpp"

namespace matsumoto {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::vector<std::string> witnesses;
};

/// Outcome of check_axioms. `window_sound` is set when the graph has
/// boundary vertices, in which case every check quantifies over interior
/// vertices and edges with both ends interior only.
struct Report {
  std::vector<CheckResult> checks;
  bool window_sound = false;
  std::vector<std::string> notes;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  const CheckResult* find(std::string_view name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {
inline void witness(CheckResult& c, std::string w) {
  c.passed = false;
  if (c.witnesses.size() < 16) c.witnesses.push_back(std::move(w));
}
inline std::string vname(VertexId v) { return "v" + std::to_string(idx(v)); }
inline std::string rname(RootId r) { return "r" + std::to_string(idx(r)); }
}  // namespace detail

template <Backend B>
Report check_axioms(const MGraph<B>& g) {
  using detail::rname;
  using detail::vname;
  using detail::witness;
  Report rep;
  rep.window_sound = !g.all_interior();
  const auto& roots = g.roots();

  CheckResult table{"root-table", true, {}};
  {
    std::map<RayKey, RootId> seen;
    for (const auto& e : roots.entries()) {
      auto [it, fresh] = seen.emplace(e.ray.key, e.id);
      if (!fresh) witness(table, rname(e.id) + " duplicates the ray of " + rname(it->second));
      if (e.invertible != e.neg.has_value()) witness(table, rname(e.id) + ": neg link present iff invertible fails");
      if (e.neg) {
        const auto& n = roots[*e.neg];
        if (!n.neg || *n.neg != e.id) witness(table, rname(e.id) + ": neg is not an involution");
        if (n.ray.key != opposite(e.ray).key) witness(table, rname(e.id) + ": neg does not carry the opposite ray");
      }
    }
  }

  CheckResult slots{"slots", true, {}};
  for (const auto& v : g.vertices()) {
    for (std::size_t i = 0; i < v.slots.size(); ++i) {
      const Slot& s = v.slots[i];
      const std::string at = vname(v.id) + " slot " + std::to_string(i);
      if (s.infinite()) {
        if (s.via != v.basis[i]) witness(slots, at + ": infinite edge root differs from basis root");
        if (roots[s.via].invertible) witness(slots, at + ": infinite edge carries an invertible root");
      } else {
        const auto& b = roots[v.basis[i]];
        if (!b.neg || *b.neg != s.via) witness(slots, at + ": arrow root is not the negated basis root");
      }
    }
  }

  CheckResult ax1{"axiom-1", true, {}};
  for (const auto& e : roots.entries())
    if (!e.invertible && roots.find(opposite(e.ray).key))
      witness(ax1, rname(e.id) + " is noninvertible but its opposite ray is a root");

  CheckResult ax2{"axiom-2", true, {}};
  for (const auto& v : g.vertices())
    if (v.interior && !g.basis_independent(v.id)) witness(ax2, vname(v.id) + ": basis is not linearly independent");

  CheckResult ax3{"axiom-3", true, {}};
  for (const auto& v : g.vertices()) {
    if (!v.interior || !g.basis_independent(v.id)) continue;
    for (const auto& s : v.slots) {
      if (!s.compact() || idx(s.to) < idx(v.id)) continue;
      const auto& w = g.vertex(s.to);
      if (!w.interior || !g.basis_independent(w.id)) continue;
      const RootSet& pv = g.positive_set(v.id);
      const RootSet& pw = g.positive_set(w.id);
      const RootId a = s.via;
      const std::string edge = vname(v.id) + "->" + vname(w.id) + " via " + rname(a);
      for (const auto& e : roots.entries()) {
        const bool in_v = pv.contains(e.id), in_w = pw.contains(e.id);
        if (e.id == a) {
          if (in_v || !in_w) witness(ax3, edge + ": arrow root is not exactly gained");
        } else if (roots[a].neg && e.id == *roots[a].neg) {
          if (!in_v || in_w) witness(ax3, edge + ": negated arrow root is not exactly lost");
        } else if (in_v != in_w) {
          witness(ax3, edge + ": " + rname(e.id) + " changes positivity");
        }
      }
    }
  }

  CheckResult ax4{"axiom-4", true, {}};
  {
    std::map<RootSet, VertexId> seen;
    for (const auto& v : g.vertices()) {
      if (!v.interior || !g.basis_independent(v.id)) continue;
      auto [it, fresh] = seen.emplace(g.positive_set(v.id), v.id);
      if (!fresh) witness(ax4, vname(v.id) + " and " + vname(it->second) + " have equal positive systems");
    }
  }

  CheckResult nonneg{"noninvertible-positive", true, {}};
  for (const auto& e : roots.entries()) {
    if (e.invertible) continue;
    for (const auto& v : g.vertices())
      if (v.interior && g.basis_independent(v.id) && !g.positive_set(v.id).contains(e.id))
        witness(nonneg, rname(e.id) + " is not positive at " + vname(v.id));
  }

  rep.checks = {table, slots, ax1, ax2, ax3, ax4, nonneg};
  return rep;
}

}  // namespace matsumoto
