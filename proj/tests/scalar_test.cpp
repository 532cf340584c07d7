#include <gtest/gtest.h>

#include <random>

#include "matsumoto.hpp"
#include "oracles.hpp"

using namespace matsumoto;

namespace {

Vec<Exact> q(std::initializer_list<long> xs) {
  Vec<Exact> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

template <Backend B>
SimplicialCone<B> cone(std::vector<Vec<B>> gens) {
  SimplicialCone<B> c;
  for (auto& g : gens) c.gens.push_back(canonicalize<B>(g));
  return c;
}

}  // namespace

TEST(Canonicalize, RationalDividesByGcd) {
  auto r = canonicalize<Exact>(q({2, 4}));
  EXPECT_EQ(r.key, "1,2");
  EXPECT_EQ(r.dir, q({1, 2}));
}

TEST(Canonicalize, RationalKeepsSign) {
  auto r = canonicalize<Exact>(q({-3, 0}));
  EXPECT_EQ(r.key, "-1,0");
  EXPECT_NE(r.key, opposite(r).key);
}

TEST(Canonicalize, RationalClearsDenominators) {
  Vec<Exact> v{mpq_class(1, 2), mpq_class(-3, 4), mpq_class(0)};
  EXPECT_EQ(canonicalize<Exact>(v).key, "2,-3,0");
}

TEST(Canonicalize, FloatUnitNormalization) {
  auto a = canonicalize<Float>({0.6, 0.8});
  auto b = canonicalize<Float>({3.0, 4.0});
  EXPECT_EQ(a.key, b.key);
  EXPECT_NEAR(a.dir[0], 0.6, 1e-15);
  EXPECT_NEAR(a.dir[1], 0.8, 1e-15);
}

TEST(Canonicalize, FloatSnapsNegativeZero) {
  auto a = canonicalize<Float>({-1e-14, 1.0});
  auto b = canonicalize<Float>({0.0, 2.0});
  EXPECT_EQ(a.key, b.key);
}

TEST(Canonicalize, ZeroVectorRejected) {
  EXPECT_THROW(canonicalize<Exact>(q({0, 0})), Error);
  try {
    canonicalize<Float>({0.0, 0.0, 0.0});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroRay);
  }
}

TEST(Canonicalize, IdempotentOnRandomVectors) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> coord(-50, 50);
  std::uniform_int_distribution<long> scale(1, 12);
  for (int i = 0; i < 1000; ++i) {
    Vec<Exact> v{mpq_class(coord(rng), scale(rng)), mpq_class(coord(rng), scale(rng)), mpq_class(coord(rng), scale(rng))};
    if (sgn(v[0]) == 0 && sgn(v[1]) == 0 && sgn(v[2]) == 0) continue;
    auto r = canonicalize<Exact>(v);
    EXPECT_EQ(canonicalize<Exact>(r.dir).key, r.key);
    Vec<Exact> scaled = v;
    const mpq_class s(scale(rng), scale(rng));
    for (auto& x : scaled) x *= s;
    EXPECT_EQ(canonicalize<Exact>(scaled).key, r.key);
    EXPECT_NE(opposite(r).key, r.key);
  }
  std::uniform_real_distribution<double> real(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    Vec<Float> v{real(rng), real(rng), real(rng)};
    auto r = canonicalize<Float>(v);
    EXPECT_EQ(canonicalize<Float>(r.dir).key, r.key);
    EXPECT_NE(opposite(r).key, r.key);
  }
}

TEST(ConeCoords, MemberInsideQuadrant) {
  auto c = cone<Exact>({q({1, 0}), q({0, 1})});
  auto coeffs = cone_coords(c, canonicalize<Exact>(q({2, 3})));
  ASSERT_TRUE(coeffs);
  EXPECT_EQ(*coeffs, q({2, 3}));
  EXPECT_TRUE(in_cone(c, canonicalize<Exact>(q({1, 1}))));
}

TEST(ConeCoords, NonMember) {
  auto c = cone<Exact>({q({1, 0}), q({0, 1})});
  auto coeffs = cone_coords(c, canonicalize<Exact>(q({-1, 1})));
  ASSERT_TRUE(coeffs);
  EXPECT_EQ(*coeffs, q({-1, 1}));
  EXPECT_FALSE(in_cone(c, canonicalize<Exact>(q({0, -1}))));
}

TEST(ConeCoords, OutsideSpanIsNone) {
  auto c = cone<Exact>({q({1, 0, 0}), q({1, 1, 0})});
  EXPECT_FALSE(cone_coords(c, canonicalize<Exact>(q({0, 0, 1}))));
  EXPECT_FALSE(in_cone(c, canonicalize<Exact>(q({0, 0, 1}))));
}

TEST(ConeCoords, DimensionMismatch) {
  auto c = cone<Exact>({q({1, 0}), q({0, 1})});
  try {
    cone_coords(c, canonicalize<Exact>(q({1, 1, 1})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimError);
  }
}

TEST(ConeCoords, A2IdentityBasisExcludesHighestRoot) {
  // simple roots of A2 in the root basis; the basis at the identity is {-a1, -a2}
  auto c = cone<Exact>({q({-1, 0}), q({0, -1})});
  EXPECT_FALSE(in_cone(c, canonicalize<Exact>(q({1, 1}))));
  EXPECT_TRUE(in_cone(c, canonicalize<Exact>(q({-1, -1}))));
}

TEST(ConeCoords, GeneratorsAndInteriorProperty) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> coord(-6, 6);
  std::uniform_int_distribution<long> pos(1, 9);
  int tested = 0;
  while (tested < 300) {
    std::vector<Vec<Exact>> gens(3, Vec<Exact>(3));
    for (auto& g : gens)
      for (auto& x : g) x = coord(rng);
    if (rank_of<Exact>(std::span<const Vec<Exact>>(gens)) != 3) continue;
    auto c = cone<Exact>(gens);
    for (const auto& g : c.gens) EXPECT_TRUE(in_cone(c, g));
    Vec<Exact> inside(3, 0);
    for (const auto& g : c.gens) {
      const mpq_class w(pos(rng));
      for (std::size_t i = 0; i < 3; ++i) inside[i] += w * g.dir[i];
    }
    auto r = canonicalize<Exact>(inside);
    EXPECT_TRUE(in_cone(c, r));
    EXPECT_FALSE(in_cone(c, opposite(r)));
    ++tested;
  }
}

TEST(ConeCoords, RationalAgreesWithFloatOnWeylGraphs) {
  for (auto entries : std::vector<std::vector<std::vector<long>>>{{{2, -1}, {-1, 2}}, {{2, -1}, {-2, 2}}, {{2, -1}, {-3, 2}}}) {
    auto g = build_weyl(CartanMatrix::from_entries(entries), 20).graph;
    for (const auto& v : g.vertices()) {
      SimplicialCone<Float> fc;
      for (RootId r : v.basis) fc.gens.push_back(canonicalize<Float>(to_doubles<Exact>(g.roots()[r].ray.dir)));
      const auto ec = g.basis_cone(v.id);
      for (const auto& e : g.roots().entries())
        EXPECT_EQ(in_cone(ec, e.ray), in_cone(fc, canonicalize<Float>(to_doubles<Exact>(e.ray.dir))));
    }
  }
}

TEST(QuotientRay, KillsModulus) {
  auto mod = canonicalize<Exact>(q({1, 0}));
  std::vector<Vec<Exact>> frame{q({0, 1})};
  auto a = quotient_ray(mod, canonicalize<Exact>(q({3, 2})), std::span<const Vec<Exact>>(frame));
  auto b = quotient_ray(mod, canonicalize<Exact>(q({-5, 2})), std::span<const Vec<Exact>>(frame));
  EXPECT_EQ(a.key, "1");
  EXPECT_EQ(a.key, b.key);
}

TEST(QuotientRay, ProportionalIsDegenerate) {
  auto mod = canonicalize<Exact>(q({1, 0}));
  std::vector<Vec<Exact>> frame{q({0, 1})};
  try {
    quotient_ray(mod, canonicalize<Exact>(q({-2, 0})), std::span<const Vec<Exact>>(frame));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateProjection);
  }
}

TEST(QuotientRay, HexagonBasesAgreeAcrossEdges) {
  auto g = build_weyl(CartanMatrix::from_entries({{2, -1}, {-1, 2}}), 10).graph;
  for (const auto& v : g.vertices())
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& s = v.slots[i];
      const auto& w = g.vertex(s.to);
      const auto other_v = g.roots()[v.basis[1 - i]].ray;
      const auto back = *g.slot_with_via(w.id, g.roots()[s.via].neg.value());
      const auto other_w = g.roots()[w.basis[1 - back]].ray;
      const auto& mod = g.roots()[s.via].ray;
      std::vector<Vec<Exact>> frame{other_v.dir};
      EXPECT_EQ(quotient_ray(mod, other_v, std::span<const Vec<Exact>>(frame)).key,
                quotient_ray(mod, other_w, std::span<const Vec<Exact>>(frame)).key);
    }
}

TEST(Linalg, SolveAndRank) {
  std::vector<Vec<Exact>> gens{q({1, 2, 3}), q({0, 1, 1})};
  auto s = solve_in_span<Exact>(std::span<const Vec<Exact>>(gens), q({2, 7, 9}));
  EXPECT_EQ(s.rank, 2u);
  ASSERT_TRUE(s.coefficients);
  EXPECT_EQ(*s.coefficients, q({2, 3}));
  EXPECT_FALSE(solve_in_span<Exact>(std::span<const Vec<Exact>>(gens), q({0, 0, 1})).coefficients);
  std::vector<Vec<Exact>> dep{q({1, 2}), q({2, 4})};
  EXPECT_EQ(rank_of<Exact>(std::span<const Vec<Exact>>(dep)), 1u);
}

TEST(Linalg, FloatSolveMatchesExact) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> coord(-9, 9);
  for (int t = 0; t < 200; ++t) {
    std::vector<Vec<Exact>> ge(3, Vec<Exact>(3));
    for (auto& g : ge)
      for (auto& x : g) x = coord(rng);
    Vec<Exact> target(3);
    for (auto& x : target) x = coord(rng);
    auto se = solve_in_span<Exact>(std::span<const Vec<Exact>>(ge), target);
    if (se.rank != 3) continue;
    std::vector<Vec<Float>> gf;
    for (const auto& g : ge) gf.push_back(to_doubles<Exact>(g));
    auto sf = solve_in_span<Float>(std::span<const Vec<Float>>(gf), to_doubles<Exact>(target));
    ASSERT_TRUE(sf.coefficients);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR((*sf.coefficients)[i], (*se.coefficients)[i].get_d(), 1e-9);
  }
}

TEST(Linalg, OrthogonalComplement) {
  std::vector<Vec<Exact>> vs{q({1, 0, 1}), q({0, 1, 1})};
  auto n = orthogonal_complement_vector<Exact>(std::span<const Vec<Exact>>(vs), 3);
  for (const auto& v : vs) EXPECT_EQ(sgn(dot<Exact>(n, v)), 0);
  EXPECT_EQ(canonicalize<Exact>(n).key == "1,1,-1" || canonicalize<Exact>(n).key == "-1,-1,1", true);
}

TEST(Angles, MatchOracle) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> real(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    Vec<Float> a{real(rng), real(rng), real(rng)}, b{real(rng), real(rng), real(rng)};
    EXPECT_NEAR(angle_between<Float>(a, b), oracle::angle(a, b), 1e-7);
  }
  EXPECT_NEAR(angle_between<Exact>(q({1, 0}), q({-1, 0})), std::acos(-1.0), 1e-12);
}
