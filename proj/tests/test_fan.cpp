#include <gtest/gtest.h>

#include "corpus.hpp"
#include "fanih/combinatorics.hpp"
#include "oracles.hpp"

using namespace corpus;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST(Fan, QuadrantsLattice) {
  FanPtr f = cross_polytope(2);
  EXPECT_EQ(f->num_cones(), 9);
  EXPECT_EQ(f->origin(), 0);
  EXPECT_EQ(f->cone(0).dim, 0);
  for (int c = 1; c < f->num_cones(); ++c) EXPECT_LE(f->cone(c - 1).dim, f->cone(c).dim);
  EXPECT_EQ(f->maximal_cones().size(), 4u);
  EXPECT_EQ(f->classify_support(), SupportClass::Complete);
  EXPECT_TRUE(f->boundary().empty());
  EXPECT_TRUE(f->simplicial());
  int ray = f->find_cone({0});
  EXPECT_EQ(f->star(ray).size(), 3u);  // the ray and its two quadrants
}

TEST(Fan, ConvexSupportAndBoundary) {
  FanPtr q = simplex_cone(2);
  EXPECT_EQ(q->classify_support(), SupportClass::Convex);
  EXPECT_EQ(q->boundary_walls().size(), 2u);
  FanPtr sq = square_cone();
  EXPECT_FALSE(sq->simplicial());
  EXPECT_EQ(sq->cone(sq->maximal_cones()[0]).facets.size(), 4u);
  EXPECT_EQ(sq->classify_support(), SupportClass::Convex);
}

TEST(Fan, LocateAndBarycenter) {
  FanPtr f = cross_polytope(2);
  int c = f->locate(ivec({2, 3}));
  EXPECT_EQ(f->cone(c).rays, (std::vector<int>{0, 2}));  // rays e1, e2
  EXPECT_EQ(f->locate(ivec({0, 0})), f->origin());
  Vec b = f->barycenter(c);
  EXPECT_TRUE(f->contains(c, b));
}

TEST(Fan, InputErrors) {
  // overlapping cones
  EXPECT_EQ(kind_of([] { make_fan(2, {ivec({1, 0}), ivec({0, 1}), ivec({1, 1})}, {{0, 1}, {0, 2}}); }),
            ErrorKind::OverlappingCones);
  // zero ray
  EXPECT_EQ(kind_of([] { make_fan(2, {ivec({0, 0}), ivec({0, 1})}, {{0, 1}}); }), ErrorKind::DegenerateRay);
  // ray index out of range is caught by the JSON reader
  json j = {{"dim", 2}, {"rays", {{"1", "0"}}}, {"cones", {{0, 3}}}};
  EXPECT_EQ(kind_of([&] { fan_from_json(j); }), ErrorKind::InvalidInput);
}

TEST(Fan, Lineality) {
  // half-plane y >= 0 as two cones around the line x
  Matrix L = Matrix::from_rows({ivec({1, 0})}, 2);
  FanPtr f = std::make_shared<const Fan>(build_fan(2, {ivec({0, 1})}, {{0}}, L));
  EXPECT_FALSE(f->pointed());
  EXPECT_EQ(f->lineality_dim(), 1);
  QuotientFan q = pointed_reduction(f);
  EXPECT_TRUE(q.fan->pointed());
  EXPECT_EQ(q.fan->ambient_dim(), 1);
  EXPECT_EQ(q.fan->num_cones(), 2);
}

TEST(Subdivision, StarAndFibres) {
  FanPtr c = simplex_cone(3);
  SubdivisionMap st = star_subdivision(c, c->maximal_cones()[0], ivec({1, 1, 1}));
  EXPECT_EQ(st.source->maximal_cones().size(), 3u);
  int top = c->maximal_cones()[0];
  // everything new sits over the open top cone: 3 maximal, 3 interior walls, the new ray
  EXPECT_EQ(st.preimage(top).size(), 3u + 3u + 1u);
  EXPECT_EQ(int(st.fiber(top).size()), st.source->num_cones());  // fibre is over the closed cone
  EXPECT_EQ(st.fiber(c->origin()).size(), 1u);
  BarycentricSubdivision b = barycentric_subdivision(c);
  EXPECT_EQ(b.map.source->maximal_cones().size(), 6u);
  EXPECT_EQ(b.steps.size(), 4u);  // three 2-faces and the top cone
}

TEST(Subdivision, RejectsNonSubdivision) {
  FanPtr c = simplex_cone(2);
  FanPtr other = make_fan(2, {ivec({1, 0}), ivec({-1, 1})}, {{0, 1}});
  EXPECT_EQ(kind_of([&] { make_subdivision(other, c); }), ErrorKind::NotASubdivision);
  EXPECT_EQ(kind_of([&] { star_subdivision(c, c->maximal_cones()[0], ivec({-1, 1})); }),
            ErrorKind::RayNotInterior);
}

TEST(Subdivision, ProductAndQuotient) {
  FanPtr a = cross_polytope(2), b = cross_polytope(1);
  Fan p = product_fan(*a, *b);
  EXPECT_EQ(p.num_cones(), a->num_cones() * b->num_cones());
  EXPECT_EQ(p.classify_support(), SupportClass::Complete);
  // star of a vertex ray of the cube: three quadrilaterals meeting there
  FanPtr c = cube();
  QuotientFan q = quotient_star(c, c->find_cone({0}));
  EXPECT_EQ(q.fan->ambient_dim(), 2);
  EXPECT_EQ(q.fan->num_rays(), 3);
  EXPECT_EQ(q.fan->maximal_cones().size(), 3u);
  EXPECT_EQ(q.fan->classify_support(), SupportClass::Complete);
  for (int k = 0; k < q.fan->num_cones(); ++k) EXPECT_GE(q.to_original[k], 0);
}

TEST(Subdivision, Semismall) {
  for (const auto& s : cone_subdivisions()) {
    Smallness sm = detect_semismall(s.pi);
    if (s.family == "edge") EXPECT_TRUE(sm.semismall) << s.name;
    if (s.family == "barycentric") EXPECT_FALSE(sm.semismall) << s.name;
  }
}

TEST(Combinatorics, LocalHAgainstOracle) {
  for (const auto& s : cone_subdivisions()) {
    int top = s.pi.target->maximal_cones()[0];
    std::vector<oracle::Row> target, rays(s.pi.source->rays().begin(), s.pi.source->rays().end());
    for (int r : s.pi.target->cone(top).rays) target.push_back(s.pi.target->ray(r));
    std::vector<oracle::RaySet> mx;
    for (int m : s.pi.source->maximal_cones()) mx.push_back(s.pi.source->cone(m).rays);
    oracle::Poly want = oracle::local_h(target, rays, mx);
    std::vector<long> got = stanley_local_h(s.pi, top);
    EXPECT_EQ(got, want) << s.name;
    // local h is symmetric
    std::vector<long> rev(got.rbegin(), got.rend());
    EXPECT_EQ(got, rev) << s.name;
  }
}

TEST(Combinatorics, HFromF) {
  // boundary of the triangle: f = (1, 3, 3) -> h = (1, 1, 1)
  EXPECT_EQ(h_from_f({1, 3, 3}), (std::vector<long>{1, 1, 1}));
  // octahedron fan: f = (1, 6, 12, 8) -> (1, 3, 3, 1)
  EXPECT_EQ(h_from_f({1, 6, 12, 8}), (std::vector<long>{1, 3, 3, 1}));
}
