#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace matsumoto;

namespace {

const double kPi = std::acos(-1.0);

std::vector<double> as_doubles(const Vec<Exact>& v) { return to_doubles<Exact>(v); }

double dotd(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Chambers containing xi strictly, computed from basis rays directly.
std::vector<std::size_t> strict_chambers(const MGraph<Exact>& g, const std::vector<double>& xi) {
  std::vector<std::size_t> out;
  for (const auto& v : g.vertices()) {
    bool in = true;
    for (RootId r : v.basis) in = in && dotd(as_doubles(g.roots()[r].ray.dir), xi) > 1e-12;
    if (in) out.push_back(idx(v.id));
  }
  return out;
}

Vec<Exact> random_functional(std::mt19937& rng, std::size_t d) {
  std::uniform_int_distribution<int> coord(-50, 50);
  Vec<Exact> xi(d);
  for (auto& x : xi) x = mpq_class(coord(rng), 7);
  return xi;
}

void expect_code(ErrorCode code, auto&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

FanChamber chamber(std::vector<Vec<Exact>> gens, std::string label = {}) {
  const std::size_t d = gens.size();
  return FanChamber{std::move(gens), std::vector<bool>(d, false), std::move(label)};
}

}  // namespace

TEST(Chambers, ContainsBaseChamberPoints) {
  const auto g = fixtures::a2();
  const auto& base = g.vertex(g.base());
  // sum of the dual basis lies inside the base chamber
  const auto gens = chamber_generators(g, g.base());
  Vec<Exact> xi(2, 0);
  for (const auto& v : gens)
    for (std::size_t i = 0; i < 2; ++i) xi[i] += v[i];
  EXPECT_TRUE(chamber_contains(g, g.base(), xi));
  for (std::size_t i = 0; i < 2; ++i) {
    // each generator pairs to zero with the other basis root and positively with its own
    EXPECT_GT(sgn(dot<Exact>(gens[i], g.roots()[base.basis[i]].ray.dir)), 0);
    EXPECT_EQ(sgn(dot<Exact>(gens[i], g.roots()[base.basis[1 - i]].ray.dir)), 0);
  }
  const Vec<Exact> minus = negated<Exact>(xi);
  EXPECT_FALSE(chamber_contains(g, g.base(), minus));
}

TEST(Chambers, LocateOppositeReachesLongestElement) {
  const auto g = fixtures::a2();
  const auto gens = chamber_generators(g, g.base());
  Vec<Exact> xi(2, 0);
  for (const auto& v : gens)
    for (std::size_t i = 0; i < 2; ++i) xi[i] -= v[i];
  const auto v = locate(g, xi);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(distance(g, g.base(), *v), 3u);
  EXPECT_TRUE(chamber_contains(g, *v, xi));
}

TEST(Chambers, LocateOutsideTitsConeIsNone) {
  const auto g = build_segment(2);
  const auto& base = g.vertex(g.base());
  std::optional<RootId> delta;
  for (RootId r : base.basis)
    if (!g.roots()[r].invertible) delta = r;
  ASSERT_TRUE(delta.has_value());
  const auto xi = negated<Float>(g.roots()[*delta].ray.dir);
  EXPECT_FALSE(locate(g, xi).has_value());
  EXPECT_FALSE(in_D_prime(g, xi));
  const auto s = fixtures::star(2);
  EXPECT_FALSE(locate(s, Vec<Exact>{-1, 1}).has_value());
  EXPECT_EQ(locate(s, Vec<Exact>{1, 1}), s.base());
}

TEST(Chambers, LocateLeavingWindowThrows) {
  const auto g = build_weyl(CartanMatrix::from_entries({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}), 3).graph;
  // far from the base chamber but inside the Tits cone
  const auto gens = chamber_generators(g, g.base());
  Vec<Exact> xi = gens[0];
  for (std::size_t i = 0; i < 3; ++i) xi[i] = gens[0][i] * 40 + gens[1][i] - gens[2][i] * 30;
  expect_code(ErrorCode::OutOfWindow, [&] { locate(g, xi); });
}

TEST(Chambers, FiniteFansCoverSpaceOnce) {
  std::mt19937 rng(41);
  for (const auto& g : {fixtures::a2(), fixtures::b2(), fixtures::a3()}) {
    for (int t = 0; t < 500; ++t) {
      const auto xi = random_functional(rng, g.dim());
      const auto xd = as_doubles(xi);
      const auto strict = strict_chambers(g, xd);
      EXPECT_TRUE(in_D_prime(g, xi));
      const auto v = locate(g, xi);
      ASSERT_TRUE(v.has_value());
      EXPECT_TRUE(chamber_contains(g, *v, xi));
      // generic points lie in exactly one chamber; points on walls in none strictly
      EXPECT_LE(strict.size(), 1u);
      if (strict.size() == 1) {
        EXPECT_EQ(strict[0], idx(*v));
      }
    }
  }
}

TEST(Chambers, AffineWindowSoundness) {
  const auto g = build_weyl(CartanMatrix::from_entries({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}), 8).graph;
  std::mt19937 rng(3);
  std::size_t checked = 0;
  for (const auto& v : g.vertices()) {
    if (distance(g, g.base(), v.id) > 4) continue;
    const auto gens = chamber_generators(g, v.id);
    std::uniform_int_distribution<int> w(1, 9);
    Vec<Exact> xi(3, 0);
    for (const auto& gen : gens) {
      const int k = w(rng);
      for (std::size_t i = 0; i < 3; ++i) xi[i] += gen[i] * k;
    }
    EXPECT_TRUE(in_D_prime(g, xi));
    EXPECT_EQ(locate(g, xi), v.id);
    ++checked;
  }
  EXPECT_GT(checked, 10u);
  // the imaginary direction pairs to zero with every root shift: minus it is outside
  const auto gens = chamber_generators(g, g.base());
  Vec<Exact> out(3, 0);
  for (const auto& gen : gens)
    for (std::size_t i = 0; i < 3; ++i) out[i] -= gen[i];
  EXPECT_FALSE(in_D_prime(g, out));
}

TEST(Gaps, HexagonRootsSixtyDegrees) {
  const auto g = fixtures::euclidean_hexagon();
  EXPECT_TRUE(check_axioms(g).passed());
  ASSERT_EQ(g.roots().size(), 6u);
  for (std::size_t r = 0; r < g.roots().size(); ++r) EXPECT_NEAR(isolation_gap(g, root_id(r)), kPi / 3, 1e-9);
  // in simple-root coordinates the same roots sit at 45 and 90 degrees
  const auto s = fixtures::hexagon();
  for (std::size_t r = 0; r < s.roots().size(); ++r) EXPECT_NEAR(isolation_gap(s, root_id(r)), kPi / 4, 1e-9);
}

TEST(Gaps, FiniteExamplesIsolated) {
  for (const auto& g : {fixtures::a2(), fixtures::b2(), fixtures::g2(), fixtures::a3(), fixtures::b3()})
    for (std::size_t r = 0; r < g.roots().size(); ++r) EXPECT_GT(isolation_gap(g, root_id(r)), 1e-6);
}

TEST(Gaps, MidpointFanLinesConverge) {
  double prev = kPi, prev_gap = kPi;
  for (std::size_t n = 2; n <= 10; ++n) {
    const auto ex = midpoint_fan(n);
    const auto limit = as_doubles(ex.limit.dir);
    const auto last = as_doubles(ex.graph.roots()[ex.fan_line_roots.back()].ray.dir);
    const double a = oracle::angle(last, limit);
    EXPECT_LE(a, std::ldexp(1.0, 2 - static_cast<int>(n))) << "n=" << n;
    EXPECT_LT(a, prev);
    prev = a;
    // invertible roots stay isolated in the window
    for (std::size_t r = 0; r < ex.graph.roots().size(); ++r)
      if (ex.graph.roots()[root_id(r)].invertible) {
        EXPECT_GT(isolation_gap(ex.graph, root_id(r)), 1e-6);
      }
    // the limit lies on line BC, the noninvertible wall of ABM0, whose gap shrinks
    const auto lim = ex.graph.roots().find(ex.limit.key);
    ASSERT_TRUE(lim.has_value());
    EXPECT_FALSE(ex.graph.roots()[*lim].invertible);
    const double gap = isolation_gap(ex.graph, *lim);
    EXPECT_LE(gap, a + 1e-12);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
}

TEST(Midpoint, AxiomsHold) {
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto ex = midpoint_fan(n);
    const auto rep = midpoint_report(ex);
    EXPECT_TRUE(rep.passed()) << "n=" << n;
    EXPECT_EQ(ex.graph.vertex_count(), n + 1);
    EXPECT_FALSE(ex.graph.vertex(vertex_id(n)).interior);
  }
}

TEST(Midpoint, DepthOneSharesAM0) {
  const auto ex = midpoint_fan(1);
  ASSERT_EQ(ex.fan.chambers.size(), 2u);
  EXPECT_EQ(ex.fan.adjacency.size(), 1u);
  std::size_t shared = 0;
  for (const auto& w : ex.fan.walls) {
    if (w.chambers.size() != 2) continue;
    ++shared;
    // the wall lies on line A M0: orthogonal to both lifted points
    for (const auto& name : {"A", "M0"}) {
      const auto& p = ex.points.at(name);
      EXPECT_EQ(sgn(dot<Exact>(w.normal, Vec<Exact>{p[0], p[1], mpq_class(1)})), 0);
    }
  }
  EXPECT_EQ(shared, 1u);
}

TEST(Midpoint, Deterministic) {
  const auto a = midpoint_fan(5), b = midpoint_fan(5);
  EXPECT_EQ(a.graph.roots().size(), b.graph.roots().size());
  for (std::size_t r = 0; r < a.graph.roots().size(); ++r)
    EXPECT_EQ(a.graph.roots()[root_id(r)].ray.key, b.graph.roots()[root_id(r)].ray.key);
}

TEST(Fans, A2FanRebuildsHexagon) {
  const auto g = fixtures::a2();
  const Fan fan = fan_of(g);
  EXPECT_EQ(fan.chambers.size(), 6u);
  EXPECT_EQ(fan.adjacency.size(), 6u);
  const auto h = dual_reconstruct(fan);
  EXPECT_TRUE(check_axioms(h).passed());
  EXPECT_TRUE(find_isomorphism(g, h).has_value());
  EXPECT_TRUE(find_isomorphism(fixtures::hexagon(), h).has_value());
}

TEST(Fans, RoundTripsThroughGraphs) {
  for (const auto& g : {fixtures::b2(), fixtures::g2(), fixtures::a3(), fixtures::a1_cubed()}) {
    const auto h = dual_reconstruct(fan_of(g));
    EXPECT_TRUE(find_isomorphism(g, h).has_value());
  }
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto ex = midpoint_fan(n);
    const auto h = dual_reconstruct(ex.fan);
    EXPECT_TRUE(check_axioms(h).passed());
    EXPECT_TRUE(find_isomorphism(ex.graph, h).has_value()) << "n=" << n;
  }
}

TEST(Fans, QuadrantFanIsSquare) {
  std::vector<FanChamber> cs;
  for (int sx : {1, -1})
    for (int sy : {1, -1}) cs.push_back(chamber({{sx, 0}, {0, sy}}));
  const auto fan = make_fan(2, cs);
  EXPECT_EQ(fan.walls.size(), 4u);
  const auto g = dual_reconstruct(fan);
  EXPECT_EQ(g.vertex_count(), 4u);
  EXPECT_TRUE(check_axioms(g).passed());
  EXPECT_TRUE(find_isomorphism(g, build_polygon(2)).has_value());
}

TEST(Fans, BoundaryWallsBecomeInfiniteEdges) {
  const auto fan = make_fan(2, {chamber({{1, 0}, {1, 1}}), chamber({{1, 1}, {0, 1}})});
  const auto g = dual_reconstruct(fan);
  std::size_t infinite = 0;
  for (const auto& v : g.vertices())
    for (const auto& s : v.slots) infinite += s.infinite();
  EXPECT_EQ(infinite, 2u);
  EXPECT_TRUE(check_axioms(g).passed());
}

TEST(Fans, Rejected) {
  expect_code(ErrorCode::BadFan, [] { make_fan(2, {chamber({{1, 0}, {0, 1}}), chamber({{1, 1}, {-1, 1}})}); });
  expect_code(ErrorCode::BadFan, [] { make_fan(2, {chamber({{1, 0}, {0, 1}, {1, 1}})}); });
  expect_code(ErrorCode::BadFan, [] { make_fan(2, {chamber({{1, 0}, {2, 0}})}); });
  expect_code(ErrorCode::BadFan, [] { make_fan(4, {}); });
  expect_code(ErrorCode::BadFan, [] { dual_reconstruct(make_fan(2, {})); });
}

TEST(Isomorphism, DistinguishesGraphs) {
  EXPECT_TRUE(find_isomorphism(fixtures::b2(), fixtures::c2()).has_value());
  EXPECT_FALSE(find_isomorphism(fixtures::a2(), fixtures::b2()).has_value());
  EXPECT_FALSE(find_isomorphism(build_polygon(3), build_segment(5)).has_value());
}
