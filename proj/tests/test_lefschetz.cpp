#include <gtest/gtest.h>

#include "corpus.hpp"

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

// cohomology of P1 x P1: 1; a, b; ab with a^2 = b^2 = 0
LefschetzData p1p1(Vec l) {
  LefschetzData D;
  D.center = 2;
  D.dims = {{0, 1}, {2, 2}, {4, 1}};
  D.op[0] = Matrix::from_columns({l}, 2);
  D.op[2] = Matrix::from_rows({Vec{l[1], l[0]}}, 2);
  D.form[0] = Matrix::from_rows({{1}}, 1);
  D.form[2] = Matrix::from_rows({{0, 1}, {1, 0}}, 2);
  D.form[4] = Matrix::from_rows({{1}}, 1);
  return D;
}

}  // namespace

TEST(Checks, AmpleClassOnP1xP1) {
  LefschetzData D = p1p1({1, 1});
  LefschetzReport hl = check_hl(D);
  EXPECT_TRUE(hl.pass);
  ASSERT_EQ(hl.rows.size(), 1u);
  EXPECT_EQ(hl.rows[0].rank, 1);
  HodgeRiemannReport hr = check_hr(D);
  EXPECT_TRUE(hr.pass);
  ASSERT_EQ(hr.rows.size(), 2u);
  // middle degree: hyperbolic form, primitive line a - b is negative, sign -1
  EXPECT_EQ(hr.rows[1].full, (Inertia{1, 1, 0}));
  EXPECT_EQ(hr.rows[1].prim_dim, 1);
  EXPECT_EQ(hr.rows[1].sign, -1);
  EXPECT_EQ(hr.rows[1].prim, (Inertia{1, 0, 0}));
  PrimitiveDecomposition pd = primitive_decomposition(D);
  EXPECT_EQ(pd.pieces.size(), 4u);  // 1, L, L^2 and the primitive middle class
}

TEST(Checks, NefButNotAmple) {
  // L = a: L^2 = 0, so HL fails in degree 0 with the unit as witness
  LefschetzData D = p1p1({1, 0});
  LefschetzReport hl = check_hl(D);
  EXPECT_FALSE(hl.pass);
  EXPECT_EQ(hl.rows[0].witness.size(), 1u);
  EXPECT_EQ(kind_of([&] { primitive_decomposition(D); }), ErrorKind::HLFailed);
}

TEST(Checks, DefiniteFormViolatesHR) {
  LefschetzData D = p1p1({1, 1});
  D.form[2] = Matrix::identity(2);
  EXPECT_TRUE(check_hl(D).pass);
  EXPECT_FALSE(check_hr(D).pass);
  D.form[2] = Matrix::from_rows({{0, 1}, {2, 0}}, 2);
  HodgeRiemannReport hr = check_hr(D);
  EXPECT_FALSE(hr.pass);
  EXPECT_FALSE(hr.rows[1].symmetric);
}

TEST(Verify, CompleteFans) {
  for (FanPtr f : {cross_polytope(2), cross_polytope(3)}) {
    VerifyResult r = verify_hl_hr(ones(f));
    EXPECT_TRUE(r.pass());
    for (int tau = 1; tau < f->num_cones(); ++tau) EXPECT_TRUE(verify_hl_hr(ones(f), tau).pass()) << tau;
  }
  FanPtr c = cube();
  EXPECT_TRUE(verify_hl_hr(cube_function(c)).pass());
}

TEST(Verify, LinearControl) {
  FanPtr f = cross_polytope(2);
  PiecewiseLinear lin = PiecewiseLinear::linear(f, ivec({1, 0}));
  EXPECT_EQ(kind_of([&] { verify_hl_hr(lin); }), ErrorKind::NotStrictlyConvex);
  EXPECT_FALSE(verify_hl_hr_unchecked(lin).pass());
  EXPECT_EQ(kind_of([&] { verify_hl_hr(ones(simplex_cone(2))); }), ErrorKind::NotComplete);
}

TEST(Verify, ConvexAndComplete) {
  for (const auto& v : convex_fans())
    if (v.fan->ambient_dim() <= 3) EXPECT_TRUE(verify_convex(v.lhat).pass()) << v.name;
  // complete fan, l = lhat
  FanPtr f = cross_polytope(2);
  EXPECT_TRUE(verify_complete(ones(f), ones(f)).pass());
  EXPECT_EQ(kind_of([&] { verify_convex(ones(f).scaled(-1)); }), ErrorKind::NotStrictlyConvex);
}

TEST(Verify, RelativeEdgeSplit) {
  for (const auto& s : cone_subdivisions()) {
    if (s.name != "edge_split") continue;
    RelativeResult r = verify_relative(s.pi, s.pi.source->origin(), s.lhat);
    EXPECT_TRUE(r.pass());
    EXPECT_FALSE(r.hl.empty());
    // the pulled back function is rejected before any computation
    PiecewiseLinear pb = ones(s.pi.target).pullback(s.pi);
    EXPECT_EQ(kind_of([&] { verify_relative(s.pi, s.pi.source->origin(), pb); }), ErrorKind::NotRelativelyConvex);
  }
}

TEST(Verify, Deformation) {
  std::vector<Triple> ts = complete_triples(false);
  ASSERT_FALSE(ts.empty());
  const Triple& t = ts.front();
  DeformationResult r = verify_deformation(t.pi, t.pi.source->origin(), t.l, t.lhat, default_eps_schedule(4));
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.steps.size(), 3u);  // 1/4, 1/8, 1/16
  for (size_t i = 1; i < r.steps.size(); ++i) EXPECT_LT(r.steps[i].eps, r.steps[i - 1].eps);
}
