#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "matsumoto.hpp"

using namespace matsumoto;

namespace {

std::string read_text(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

Json read_json(const std::string& path) { return parse_json_text(read_text(path)); }

AnyGraph load_graph(const std::string& path, bool verify = false) { return build_from_file(read_json(path), verify); }

VertexId parse_vertex(std::string s) {
  if (!s.empty() && s[0] == 'v') s.erase(0, 1);
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(s, &used);
    if (used == s.size()) return vertex_id(v);
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ParseError, "bad vertex id \"" + s + "\"");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto a = item.find_first_not_of(" \t"), b = item.find_last_not_of(" \t");
    if (a == std::string::npos) throw Error(ErrorCode::ParseError, "empty coordinate in \"" + s + "\"");
    out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

template <Backend B>
Functional<B> parse_functional(const std::string& s, std::size_t dim) {
  Functional<B> xi;
  for (const auto& c : split_list(s)) {
    if constexpr (std::is_same_v<B, Exact>) {
      xi.push_back(parse_rational(Json(c)));
    } else {
      std::size_t used = 0;
      double x = 0;
      try {
        x = std::stod(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != c.size()) throw Error(ErrorCode::ParseError, "bad coordinate \"" + c + "\"");
      xi.push_back(x);
    }
  }
  if (xi.size() != dim) throw Error(ErrorCode::DimError, "functional has " + std::to_string(xi.size()) + " coordinates, expected " + std::to_string(dim));
  return xi;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write " + out);
  f << text;
}

void emit(const Json& j, const std::string& out) { emit(j.dump(2) + "\n", out); }

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::AxiomViolation:
    case ErrorCode::KeyCollision:
    case ErrorCode::OutOfWindow:
    case ErrorCode::BoundaryVertex:
    case ErrorCode::CapExceeded:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matsumoto graphs: generation, verification, braid certificates, colorings, dual fans"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a graph as JSON");
  gen->require_subcommand(1);
  std::string out_path;
  std::string matrix_path, backend = "float";
  std::size_t radius = 10;
  auto* gen_coxeter = gen->add_subcommand("coxeter", "Cayley graph from a Coxeter matrix");
  gen_coxeter->add_option("--matrix", matrix_path, "Coxeter matrix JSON")->required();
  gen_coxeter->add_option("--radius", radius, "window radius");
  gen_coxeter->add_option("--backend", backend, "float or rational (rational needs m in {2,3,inf})")->check(CLI::IsMember({"float", "rational"}));
  gen_coxeter->add_option("--out", out_path);
  auto* gen_weyl = gen->add_subcommand("weyl", "Weyl group Cayley graph from a Cartan matrix (exact)");
  gen_weyl->add_option("--cartan,--matrix", matrix_path, "Cartan matrix JSON")->required();
  gen_weyl->add_option("--radius", radius, "window radius");
  gen_weyl->add_option("--out", out_path);
  std::string kind;
  int m = 3;
  std::size_t k = 1;
  auto* gen_rank2 = gen->add_subcommand("rank2", "rank-2 graph: polygon, idihedral, tail, segment");
  gen_rank2->add_option("kind", kind)->required()->check(CLI::IsMember({"polygon", "idihedral", "tail", "segment"}));
  gen_rank2->add_option("--m", m, "polygon order (2m-gon)");
  gen_rank2->add_option("--k", k, "compact edges of a segment");
  gen_rank2->add_option("--radius", radius, "window radius for idihedral and tail");
  gen_rank2->add_option("--out", out_path);
  std::size_t depth = 4;
  auto* gen_midpoint = gen->add_subcommand("midpoint", "triangle-midpoint fan graph");
  gen_midpoint->add_option("--n", depth, "fan depth")->check(CLI::PositiveNumber);
  gen_midpoint->add_option("--out", out_path);
  std::string graph_path = "-";
  bool no_verify = false;
  auto* gen_file = gen->add_subcommand("file", "load, validate and normalize a graph document");
  gen_file->add_option("graph", graph_path)->required();
  gen_file->add_flag("--no-verify", no_verify, "skip the axiom check");
  gen_file->add_option("--out", out_path);

  // queries
  auto* verify = app.add_subcommand("verify", "check the axioms; exit 1 on failure");
  verify->add_option("graph", graph_path, "graph JSON (default: stdin)");
  bool as_json = false;
  verify->add_flag("--json", as_json, "print the report as JSON");

  std::string va, vb;
  auto* dist = app.add_subcommand("dist", "BFS and geometric distance");
  dist->add_option("graph", graph_path)->required();
  dist->add_option("from", va)->required();
  dist->add_option("to", vb)->required();

  std::size_t limit = 100000;
  auto* words = app.add_subcommand("words", "all shortest paths between two vertices");
  words->add_option("graph", graph_path)->required();
  words->add_option("from", va)->required();
  words->add_option("to", vb)->required();
  words->add_option("--limit", limit);

  std::string pa, pb;
  auto* cert = app.add_subcommand("cert", "braid-move certificate between two shortest paths");
  cert->add_option("graph", graph_path)->required();
  cert->add_option("--a", pa, "source path JSON")->required();
  cert->add_option("--b", pb, "target path JSON")->required();

  std::string cert_path;
  auto* cert_verify = app.add_subcommand("cert-verify", "replay a certificate; exit 1 if rejected");
  cert_verify->add_option("graph", graph_path)->required();
  cert_verify->add_option("certificate", cert_path)->required();

  auto* color = app.add_subcommand("color", "global coloring; exit 1 with a witness cycle if none");
  color->add_option("graph", graph_path, "graph JSON (default: stdin)");

  auto* dual = app.add_subcommand("dual", "dual geometry");
  dual->require_subcommand(1);
  std::string xi;
  auto* dual_locate = dual->add_subcommand("locate", "vertex whose chamber contains a functional");
  dual_locate->add_option("graph", graph_path)->required();
  dual_locate->add_option("--xi", xi, "comma-separated coordinates")->required();
  std::size_t midpoint = 0;
  auto* dual_fan = dual->add_subcommand("fan", "fan JSON of a graph or of the midpoint example");
  auto* fan_graph = dual_fan->add_option("graph", graph_path, "rational graph JSON");
  dual_fan->add_option("--midpoint", midpoint);

  auto* exp = app.add_subcommand("export", "export a graph");
  exp->require_subcommand(1);
  auto* exp_dot = exp->add_subcommand("dot", "Graphviz DOT");
  exp_dot->add_option("graph", graph_path, "graph JSON (default: stdin)");
  exp_dot->add_option("--out", out_path);
  auto* exp_json = exp->add_subcommand("json", "normalized graph JSON");
  exp_json->add_option("graph", graph_path, "graph JSON (default: stdin)");
  exp_json->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen_coxeter) {
      auto doc = matrix_from_json(read_json(matrix_path));
      if (!std::holds_alternative<CoxeterMatrix>(doc)) throw Error(ErrorCode::ParseError, "expected a coxeter matrix");
      const auto& cm = std::get<CoxeterMatrix>(doc);
      if (backend == "rational") emit(to_json(build_cayley<Exact>(cm, radius).graph), out_path);
      else emit(to_json(build_cayley<Float>(cm, radius).graph), out_path);
    } else if (*gen_weyl) {
      auto doc = matrix_from_json(read_json(matrix_path));
      if (!std::holds_alternative<CartanMatrix>(doc)) throw Error(ErrorCode::ParseError, "expected a cartan matrix");
      emit(to_json(build_weyl(std::get<CartanMatrix>(doc), radius).graph), out_path);
    } else if (*gen_rank2) {
      if (kind == "polygon") emit(to_json(build_polygon(m)), out_path);
      else if (kind == "idihedral") emit(to_json(build_idihedral(radius)), out_path);
      else if (kind == "tail") emit(to_json(build_tail(radius)), out_path);
      else emit(to_json(build_segment(k)), out_path);
    } else if (*gen_midpoint) {
      emit(to_json(midpoint_fan(depth).graph), out_path);
    } else if (*gen_file) {
      emit(to_json(load_graph(graph_path, !no_verify)), out_path);
    } else if (*verify) {
      const Report rep = std::visit([](const auto& g) { return check_axioms(g); }, load_graph(graph_path));
      if (as_json) std::cout << to_json(rep).dump(2) << "\n";
      else std::cout << format_report(rep);
      return rep.passed() ? 0 : 1;
    } else if (*dist) {
      std::visit(
          [&](const auto& g) {
            const VertexId a = parse_vertex(va), b = parse_vertex(vb);
            std::cout << distance(g, a, b) << " " << distance_geometric(g, a, b) << "\n";
          },
          load_graph(graph_path));
    } else if (*words) {
      std::visit(
          [&](const auto& g) {
            Json out = Json::array();
            for (const auto& p : shortest_paths(g, parse_vertex(va), parse_vertex(vb), limit)) out.push_back(to_json(p));
            emit(out, "");
          },
          load_graph(graph_path));
    } else if (*cert) {
      std::visit(
          [&](const auto& g) {
            const CellAtlas atlas(g);
            emit(to_json(matsumoto_transform(atlas, path_from_json(g, read_json(pa)), path_from_json(g, read_json(pb)))), "");
          },
          load_graph(graph_path));
    } else if (*cert_verify) {
      const bool ok = std::visit(
          [&](const auto& g) {
            const CellAtlas atlas(g);
            const auto res = verify_certificate(atlas, certificate_from_json(g, read_json(cert_path)));
            if (!res.ok) std::cerr << "rejected at move " << res.failed_move.value_or(0) << ": " << res.reason << "\n";
            return res.ok;
          },
          load_graph(graph_path));
      std::cout << (ok ? "ok" : "rejected") << "\n";
      return ok ? 0 : 1;
    } else if (*color) {
      return std::visit(
          [&](const auto& g) {
            auto c = global_coloring(g);
            if (auto* col = std::get_if<Coloring>(&c)) {
              emit(to_json(g, *col), "");
              return 0;
            }
            std::cerr << "no global coloring; witness cycle: " << to_json(std::get<ColoringWitness>(c).cycle).dump() << "\n";
            return 1;
          },
          load_graph(graph_path));
    } else if (*dual_locate) {
      std::visit(
          [&](const auto& g) {
            using B = typename std::decay_t<decltype(g)>::backend_type;
            const auto v = locate(g, parse_functional<B>(xi, g.dim()));
            std::cout << (v ? std::to_string(idx(*v)) : std::string("none")) << "\n";
          },
          load_graph(graph_path));
    } else if (*dual_fan) {
      if (midpoint > 0) {
        emit(to_json(midpoint_fan(midpoint).fan), "");
      } else if (fan_graph->count() > 0) {
        auto g = load_graph(graph_path);
        if (!std::holds_alternative<MGraph<Exact>>(g)) throw Error(ErrorCode::BackendMismatch, "fans need a rational graph");
        emit(to_json(fan_of(std::get<MGraph<Exact>>(g))), "");
      } else {
        throw Error(ErrorCode::ParseError, "dual fan needs a graph or --midpoint N");
      }
    } else if (*exp_dot) {
      emit(std::visit([](const auto& g) { return to_dot(g); }, load_graph(graph_path)), out_path);
    } else if (*exp_json) {
      emit(to_json(load_graph(graph_path)), out_path);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
