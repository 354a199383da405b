#include <gtest/gtest.h>

#include "corpus.hpp"

using namespace corpus;

TEST(Brion, LineFan) {
  // two half-lines; |x| in each cone's dual coordinate is u, and u / u sums to 2
  FanPtr f = cross_polytope(1);
  EvaluationContext ctx = make_evaluation_context(f);
  std::map<int, Vec> g;
  for (int m : ctx.tops) g[m] = Vec{1};
  EXPECT_EQ(brion_evaluate(ctx, g, 2), 2);
  // a linear function integrates to zero
  g[ctx.tops[0]] = Vec{-1};
  EXPECT_EQ(brion_evaluate(ctx, g, 2), 0);
}

TEST(Brion, PointClassAndPolynomials) {
  FanPtr f = cross_polytope(2);
  EvaluationContext ctx = make_evaluation_context(f);
  int uv = monomial_index(2, {1, 1});
  // u1 u2 supported on a single quadrant evaluates to 1 / |det| = 1
  std::map<int, Vec> g;
  g[ctx.tops[0]] = Vec(3);
  g[ctx.tops[0]][uv] = 1;
  EXPECT_EQ(brion_evaluate(ctx, g, 4), 1);
  // a global polynomial has zero top-degree integral
  for (int m : ctx.tops) g[m] = linear_substitution(inverse(ctx.dual.at(m)), 2) * Vec{1, 0, 0};
  EXPECT_EQ(brion_evaluate(ctx, g, 4), 0);
  // the exact sum agrees in lower degree: sum over cones of 1/(u1 u2) is zero
  std::map<int, Vec> one;
  for (int m : ctx.tops) one[m] = Vec{1};
  EXPECT_TRUE(brion_evaluate_exact(ctx, one, 0).empty());
  EXPECT_THROW(brion_evaluate(ctx, one, 2), Error);
}

TEST(Pairing, CompleteFansAreUnimodularlyPaired) {
  for (FanPtr f : {cross_polytope(2), simplex_fan(3), cube()}) {
    FanIH F(f);
    int n = F.dim();
    for (int d = 0; d <= 2 * n; d += 2) {
      Matrix P = F.pairing_matrix(d);
      ASSERT_EQ(P.rows(), P.cols());
      EXPECT_EQ(rank(P), P.rows());
      EXPECT_EQ(F.pairing_matrix(2 * n - d), P.transpose());
    }
    // top degree of a complete fan is one dimensional
    EXPECT_EQ(F.ih().dim(2 * n), 1);
  }
}

TEST(Pairing, ConvexFanRelativeAgainstAbsolute) {
  FanPtr f = square_cone();
  FanIH F(f);
  EXPECT_FALSE(F.complete());
  // IH of the cone over a square is Q[x] / ... with dims (1, 1, 0, 0); relative is the dual
  EXPECT_EQ(F.dims(), (GradedDims{{0, 1}, {2, 1}}));
  EXPECT_EQ(F.dims_rel(), (GradedDims{{4, 1}, {6, 1}}));
  for (int d = 0; d <= 6; d += 2) {
    Matrix P = F.pairing_matrix(d);
    EXPECT_EQ(P.rows(), P.cols());
    EXPECT_EQ(rank(P), P.rows());
  }
}

TEST(Pairing, IndependentOfRefinement) {
  FanPtr f = square_cone();
  FanIH a(f, nullptr, RefinementKind::Minimal);
  FanIH b(f, nullptr, RefinementKind::Barycentric);
  for (int d = 0; d <= 6; d += 2) EXPECT_EQ(a.pairing_matrix(d), b.pairing_matrix(d)) << d;
}

TEST(Pairing, NeedsPointedFan) {
  Matrix L = Matrix::from_rows({ivec({1, 0})}, 2);
  FanPtr f = std::make_shared<const Fan>(build_fan(2, {ivec({0, 1})}, {{0}}, L));
  try {
    FanIH F(f);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPointed);
  }
}

TEST(Chi, RayOfQuadrants) {
  FanPtr f = cross_polytope(2);
  int tau = f->find_cone({0});
  ChiFunction chi = chi_generator(f, tau);
  EXPECT_EQ(chi.degree, 2);
  EXPECT_EQ(chi.pieces.size(), 6u);  // two quadrants, three rays, the origin
  // the dual form is 1 on the ray itself and vanishes on the neighbouring rays
  EXPECT_EQ(chi.pieces.at(tau), Vec{1});
  for (int r : {f->find_cone({2}), f->find_cone({3})}) EXPECT_TRUE(is_zero(chi.pieces.at(r)));
}
