#pragma once

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "matsumoto/axioms.hpp"
#include "matsumoto/braid.hpp"
#include "matsumoto/coloring.hpp"
#include "matsumoto/dual.hpp"
#include "matsumoto/generators.hpp"

namespace matsumoto {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

template <class T>
T field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) parse_fail(std::string("missing field \"") + name + "\"");
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    parse_fail(std::string("field \"") + name + "\" has the wrong type");
  }
}

}  // namespace detail

/// "p/q" with q > 0 (always written with a denominator).
inline std::string format_rational(const mpq_class& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

/// Accepts "p/q", "p" or a JSON integer.
inline mpq_class parse_rational(const Json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (!j.is_string()) detail::parse_fail("rational coordinate must be a string \"p/q\"");
  const auto s = j.get<std::string>();
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) detail::parse_fail("bad rational \"" + s + "\"");
  if (q.get_den() == 0) detail::parse_fail("zero denominator in \"" + s + "\"");
  q.canonicalize();
  return q;
}

template <Backend B>
Json scalar_to_json(const typename B::Scalar& x) {
  if constexpr (std::is_same_v<B, Exact>) return format_rational(x);
  else return x + 0.0;
}

template <Backend B>
typename B::Scalar scalar_from_json(const Json& j) {
  if constexpr (std::is_same_v<B, Exact>) {
    return parse_rational(j);
  } else {
    if (!j.is_number()) detail::parse_fail("float coordinate must be a number");
    return j.get<double>();
  }
}

template <Backend B>
Json vec_to_json(const Vec<B>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(scalar_to_json<B>(x));
  return out;
}

template <Backend B>
Vec<B> vec_from_json(const Json& j) {
  if (!j.is_array()) detail::parse_fail("coordinates must be an array");
  Vec<B> v;
  for (const auto& x : j) v.push_back(scalar_from_json<B>(x));
  return v;
}

// ---------------------------------------------------------------------------
// Graph documents

template <Backend B>
Json to_json(const MGraph<B>& g) {
  Json doc;
  doc["dim"] = g.dim();
  doc["backend"] = std::string(B::name);
  doc["base"] = idx(g.base());
  Json roots = Json::array();
  for (const auto& e : g.roots().entries()) {
    Json r;
    r["id"] = idx(e.id);
    r["coords"] = vec_to_json<B>(e.ray.dir);
    r["invertible"] = e.invertible;
    if (e.neg) r["neg"] = idx(*e.neg);
    roots.push_back(std::move(r));
  }
  doc["roots"] = std::move(roots);
  Json verts = Json::array();
  for (const auto& v : g.vertices()) {
    Json jv;
    jv["id"] = idx(v.id);
    jv["interior"] = v.interior;
    Json basis = Json::array();
    for (RootId r : v.basis) basis.push_back(idx(r));
    jv["basis"] = std::move(basis);
    Json slots = Json::array();
    for (const auto& s : v.slots) {
      Json js;
      js["via"] = idx(s.via);
      if (s.compact()) js["to"] = idx(s.to);
      else if (s.infinite()) js["infinite"] = true;
      slots.push_back(std::move(js));
    }
    jv["slots"] = std::move(slots);
    verts.push_back(std::move(jv));
  }
  doc["vertices"] = std::move(verts);
  return doc;
}

inline Json to_json(const AnyGraph& g) {
  return std::visit([](const auto& x) { return to_json(x); }, g);
}

namespace detail {

template <Backend B>
MGraph<B> graph_from_json(const Json& doc) {
  const auto dim = field<std::size_t>(doc, "dim");
  const auto base = field<std::uint32_t>(doc, "base");
  if (!doc.contains("roots") || !doc["roots"].is_array()) parse_fail("\"roots\" must be an array");
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) parse_fail("\"vertices\" must be an array");

  std::vector<RootEntry<B>> entries;
  std::set<RayKey> keys;
  for (const auto& jr : doc["roots"]) {
    const auto id = field<std::uint32_t>(jr, "id");
    if (id != entries.size()) parse_fail("root ids must be 0,1,2,... in order");
    if (!jr.contains("coords")) parse_fail("root " + std::to_string(id) + " has no coords");
    const Vec<B> coords = vec_from_json<B>(jr["coords"]);
    if (coords.size() != dim) parse_fail("root " + std::to_string(id) + " has the wrong dimension");
    Ray<B> ray;
    try {
      ray = canonicalize<B>(coords);
    } catch (const Error& e) {
      parse_fail("root " + std::to_string(id) + ": " + e.what());
    }
    if (!keys.insert(ray.key).second) parse_fail("duplicated ray key " + ray.key + " at root " + std::to_string(id));
    std::optional<RootId> neg;
    if (jr.contains("neg") && !jr["neg"].is_null()) neg = root_id(field<std::uint32_t>(jr, "neg"));
    entries.push_back({root_id(id), std::move(ray), field<bool>(jr, "invertible"), neg});
  }

  std::vector<VertexRecord> verts;
  for (const auto& jv : doc["vertices"]) {
    VertexRecord v;
    const auto id = field<std::uint32_t>(jv, "id");
    if (id != verts.size()) parse_fail("vertex ids must be 0,1,2,... in order");
    v.id = vertex_id(id);
    v.interior = field<bool>(jv, "interior");
    for (auto r : field<std::vector<std::uint32_t>>(jv, "basis")) v.basis.push_back(root_id(r));
    if (!jv.contains("slots") || !jv["slots"].is_array()) parse_fail("vertex " + std::to_string(id) + " has no slots");
    for (const auto& js : jv["slots"]) {
      Slot s;
      s.via = root_id(field<std::uint32_t>(js, "via"));
      if (js.contains("to")) {
        s.kind = Slot::Kind::Compact;
        s.to = vertex_id(field<std::uint32_t>(js, "to"));
      } else if (js.contains("infinite")) {
        if (!field<bool>(js, "infinite")) parse_fail("\"infinite\" must be true when present");
        s.kind = Slot::Kind::Infinite;
      } else {
        s.kind = Slot::Kind::Open;
      }
      v.slots.push_back(s);
    }
    verts.push_back(std::move(v));
  }
  if (verts.empty()) parse_fail("graph has no vertices");
  try {
    return MGraph<B>(dim, RootTable<B>(std::move(entries)), std::move(verts), vertex_id(base));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedGraph || e.code() == ErrorCode::DimError) parse_fail(e.what());
    throw;
  }
}

}  // namespace detail

/// Parses a graph document. Schema and structural violations raise ParseError.
inline AnyGraph graph_from_json(const Json& doc) {
  const auto backend = detail::field<std::string>(doc, "backend");
  if (backend == Exact::name) return detail::graph_from_json<Exact>(doc);
  if (backend == Float::name) return detail::graph_from_json<Float>(doc);
  detail::parse_fail("unknown backend \"" + backend + "\"");
}

inline std::string format_report(const Report& r);

/// Parses and validates; an axiom failure raises AxiomViolation carrying the
/// formatted report.
inline AnyGraph build_from_file(const Json& doc, bool verify = true) {
  AnyGraph g = graph_from_json(doc);
  if (verify) {
    const Report rep = std::visit([](const auto& x) { return check_axioms(x); }, g);
    if (!rep.passed()) throw Error(ErrorCode::AxiomViolation, "\n" + format_report(rep));
  }
  return g;
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    detail::parse_fail(e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const Report& r) {
  Json j;
  j["passed"] = r.passed();
  j["window_sound"] = r.window_sound;
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"witnesses", c.witnesses}});
  j["checks"] = std::move(checks);
  j["notes"] = r.notes;
  return j;
}

inline std::string format_report(const Report& r) {
  std::ostringstream out;
  for (const auto& c : r.checks) {
    out << (c.passed ? "ok   " : "FAIL ") << c.name << (r.window_sound ? " (window-sound)" : "") << '\n';
    for (const auto& w : c.witnesses) out << "     " << w << '\n';
  }
  for (const auto& n : r.notes) out << "note " << n << '\n';
  out << (r.passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Paths and certificates

inline Json to_json(const Path& p) {
  Json roots = Json::array();
  for (const auto& s : p.steps) roots.push_back(idx(s.via));
  return {{"start", idx(p.start)}, {"roots", std::move(roots)}};
}

template <Backend B>
Path path_from_json(const MGraph<B>& g, const Json& j) {
  const auto start = detail::field<std::uint32_t>(j, "start");
  std::vector<RootId> roots;
  for (auto r : detail::field<std::vector<std::uint32_t>>(j, "roots")) roots.push_back(root_id(r));
  return path_from_roots(g, vertex_id(start), roots);
}

inline Json to_json(const Certificate& c) {
  Json moves = Json::array();
  for (const auto& mv : c.moves) {
    Json rep = Json::array();
    for (RootId r : mv.replacement) rep.push_back(idx(r));
    moves.push_back({{"pos", mv.pos}, {"m", mv.m}, {"replacement", std::move(rep)}});
  }
  return {{"source", to_json(c.source)}, {"target", to_json(c.target)}, {"moves", std::move(moves)}};
}

template <Backend B>
Certificate certificate_from_json(const MGraph<B>& g, const Json& j) {
  if (!j.is_object() || !j.contains("source") || !j.contains("target")) detail::parse_fail("certificate needs source and target");
  Certificate c{path_from_json(g, j["source"]), path_from_json(g, j["target"]), {}};
  if (!j.contains("moves") || !j["moves"].is_array()) detail::parse_fail("certificate needs a moves array");
  for (const auto& jm : j["moves"]) {
    BraidMove mv;
    mv.pos = detail::field<std::size_t>(jm, "pos");
    mv.m = detail::field<std::size_t>(jm, "m");
    for (auto r : detail::field<std::vector<std::uint32_t>>(jm, "replacement")) mv.replacement.push_back(root_id(r));
    c.moves.push_back(std::move(mv));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Colorings

template <Backend B>
Json to_json(const MGraph<B>& g, const Coloring& c) {
  Json palette = Json::array();
  for (std::size_t i = 0; i < c.palette; ++i) palette.push_back(i);
  std::map<std::string, std::size_t> edges;
  for (const auto& v : g.vertices())
    for (std::size_t i = 0; i < v.slots.size(); ++i) edges[edge_name(v.id, v.slots[i], i)] = c.slot_color[idx(v.id)][i];
  Json je = Json::object();
  for (const auto& [name, color] : edges) je[name] = color;
  return {{"palette", std::move(palette)}, {"edges", std::move(je)}};
}

// ---------------------------------------------------------------------------
// Coxeter and Cartan matrices

using MatrixDocument = std::variant<CoxeterMatrix, CartanMatrix>;

inline MatrixDocument matrix_from_json(const Json& j) {
  const auto type = detail::field<std::string>(j, "type");
  const auto n = detail::field<std::size_t>(j, "n");
  const auto entries = detail::field<std::vector<std::vector<long>>>(j, "entries");
  if (entries.size() != n) detail::parse_fail("\"entries\" must have n rows");
  for (const auto& row : entries)
    if (row.size() != n) detail::parse_fail("\"entries\" must have n columns");
  if (type == "coxeter") {
    std::vector<std::vector<int>> e(n, std::vector<int>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (entries[i][k] < 0 || entries[i][k] > 1'000'000) throw Error(ErrorCode::BadCoxeterMatrix, "entry out of range");
        e[i][k] = static_cast<int>(entries[i][k]);
      }
    return CoxeterMatrix::from_entries(e);
  }
  if (type == "cartan") return CartanMatrix::from_entries(entries);
  detail::parse_fail("matrix type must be \"coxeter\" or \"cartan\"");
}

// ---------------------------------------------------------------------------
// Fans

inline Json to_json(const Fan& f) {
  Json j;
  j["dim"] = f.dim;
  Json chambers = Json::array();
  for (const auto& c : f.chambers) {
    Json jc;
    if (!c.label.empty()) jc["label"] = c.label;
    Json gens = Json::array();
    for (const auto& g : c.generators) gens.push_back(vec_to_json<Exact>(g));
    jc["generators"] = std::move(gens);
    if (f.dim == 3) {
      Json slice = Json::array();
      for (const auto& g : c.generators) {
        if (sgn(g[2]) > 0) slice.push_back({format_rational(g[0] / g[2]), format_rational(g[1] / g[2])});
        else slice.push_back(nullptr);
      }
      jc["slice"] = std::move(slice);
    }
    jc["open"] = c.open;
    chambers.push_back(std::move(jc));
  }
  j["chambers"] = std::move(chambers);
  Json walls = Json::array();
  for (const auto& w : f.walls) {
    Json jw;
    jw["chambers"] = w.chambers;
    jw["facets"] = w.facets;
    jw["root"] = vec_to_json<Exact>(w.normal);
    jw["kind"] = w.chambers.size() == 2 ? "shared" : (w.open ? "open" : "boundary");
    walls.push_back(std::move(jw));
  }
  j["walls"] = std::move(walls);
  Json adj = Json::array();
  for (const auto& [a, b] : f.adjacency) adj.push_back({a, b});
  j["adjacency"] = std::move(adj);
  j["notes"] = f.notes;
  return j;
}

inline Fan fan_from_json(const Json& j) {
  const auto dim = detail::field<std::size_t>(j, "dim");
  if (!j.contains("chambers") || !j["chambers"].is_array()) detail::parse_fail("fan needs a chambers array");
  std::vector<FanChamber> chambers;
  for (const auto& jc : j["chambers"]) {
    FanChamber c;
    if (!jc.contains("generators") || !jc["generators"].is_array()) detail::parse_fail("chamber needs generators");
    for (const auto& g : jc["generators"]) c.generators.push_back(vec_from_json<Exact>(g));
    if (jc.contains("open")) c.open = detail::field<std::vector<bool>>(jc, "open");
    if (jc.contains("label")) c.label = detail::field<std::string>(jc, "label");
    chambers.push_back(std::move(c));
  }
  std::vector<std::string> notes;
  if (j.contains("notes")) notes = detail::field<std::vector<std::string>>(j, "notes");
  return make_fan(dim, std::move(chambers), std::move(notes));
}

// ---------------------------------------------------------------------------
// DOT

namespace detail {

template <Backend B>
std::string ray_label(const MGraph<B>& g, RootId r) {
  std::string s = "r" + std::to_string(idx(r)) + " (";
  const auto& dir = g.roots()[r].ray.dir;
  for (std::size_t i = 0; i < dir.size(); ++i) {
    if (i) s += ",";
    if constexpr (std::is_same_v<B, Exact>) {
      s += dir[i].get_str();
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4g", dir[i] + 0.0);
      s += buf;
    }
  }
  return s + ")";
}

}  // namespace detail

/// Compact edges become undirected edges labeled with color and the ray of
/// the lower-id end's arrow; infinite edges and window cuts become half-edges
/// to phantom nodes.
template <Backend B>
std::string to_dot(const MGraph<B>& g) {
  std::optional<Coloring> col;
  if (auto c = global_coloring(g); std::holds_alternative<Coloring>(c)) col = std::get<Coloring>(std::move(c));
  std::ostringstream out;
  out << "digraph matsumoto {\n  edge [dir=none];\n";
  for (const auto& v : g.vertices())
    out << "  v" << idx(v.id) << " [label=\"v" << idx(v.id) << "\"" << (v.interior ? "" : ", style=dashed") << "];\n";
  for (const auto& v : g.vertices()) {
    for (std::size_t i = 0; i < v.slots.size(); ++i) {
      const Slot& s = v.slots[i];
      const std::string color = col ? "c" + std::to_string(col->slot_color[idx(v.id)][i]) + " " : "";
      const std::string label = color + detail::ray_label(g, s.via);
      if (s.compact()) {
        if (idx(s.to) < idx(v.id)) continue;
        out << "  v" << idx(v.id) << " -> v" << idx(s.to) << " [label=\"" << label << "\"];\n";
      } else {
        const std::string phantom = "p" + std::to_string(idx(v.id)) + "_" + std::to_string(i);
        out << "  " << phantom << " [shape=point, style=invis];\n";
        out << "  v" << idx(v.id) << " -> " << phantom << " [label=\"" << label << "\", style="
            << (s.infinite() ? "bold" : "dotted") << "];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace matsumoto
