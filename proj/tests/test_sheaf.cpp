#include <gtest/gtest.h>

#include "corpus.hpp"
#include "oracles.hpp"

using namespace corpus;

namespace {

long binom(long n, long k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<long> h_of(const Fan& f) {
  std::vector<oracle::RaySet> mx;
  for (int m : f.maximal_cones()) mx.push_back(f.cone(m).rays);
  return oracle::h_vector(oracle::all_subsets(mx), f.ambient_dim());
}

}  // namespace

TEST(Sheaf, SimplicialMinimalExtensionIsStructureSheaf) {
  for (FanPtr f : {cross_polytope(2), simplex_fan(3), simplex_cone(3)}) {
    SheafModel L = minimal_extension_sheaf(f);
    for (int c = 0; c < f->num_cones(); ++c) {
      EXPECT_EQ(L.generator_dims(c), (GradedDims{{0, 1}}));
      // stalk = polynomials on Span c
      int k = f->cone(c).dim;
      for (int d = 0; d <= 6; d += 2) EXPECT_EQ(L.stalk_dim(c, d), k == 0 ? d == 0 : binom(k + d / 2 - 1, d / 2));
    }
    EXPECT_TRUE(verify_flabby(L, 4));
  }
}

TEST(Sheaf, SquareConeStalk) {
  // cone over a square: one extra generator in degree 2
  FanPtr sq = square_cone();
  SheafModel L = minimal_extension_sheaf(sq);
  int top = sq->maximal_cones()[0];
  EXPECT_EQ(L.generator_dims(top), (GradedDims{{0, 1}, {2, 1}}));
  EXPECT_TRUE(verify_flabby(L, 4));
}

TEST(Sheaf, GlobalSectionsHilbertSeries) {
  // Gamma(A) on a complete simplicial fan is free over Sym with h(t) / (1-t)^n
  for (FanPtr f : {cross_polytope(2), simplex_fan(2), cross_polytope(3)}) {
    int n = f->ambient_dim();
    SheafModel L = minimal_extension_sheaf(f);
    SectionSpace S(L, f->all_cones(), 6);
    std::vector<long> h = h_of(*f);
    for (int e = 0; e <= 3; ++e) {
      long want = 0;
      for (int i = 0; i <= std::min(e, n); ++i) want += h[i] * binom(n - 1 + e - i, n - 1);
      EXPECT_EQ(S.block(2 * e).dim(), want) << n << " " << e;
    }
  }
}

TEST(Sheaf, CohomologyOfComplete) {
  for (FanPtr f : {cross_polytope(2), simplex_fan(3), cross_polytope(3)}) {
    SheafModel L = minimal_extension_sheaf(f);
    auto S = std::make_shared<const SectionSpace>(L, f->all_cones(), 2 * f->ambient_dim());
    Cohomology H(S, S->ambient_coordinates());
    std::vector<long> h = h_of(*f);
    for (size_t i = 0; i < h.size(); ++i) EXPECT_EQ(H.dim(2 * int(i)), h[i]);
  }
}

TEST(Sheaf, PushforwardOfIdentity) {
  FanPtr f = simplex_cone(3);
  auto G = std::make_shared<const SheafModel>(minimal_extension_sheaf(f));
  Pushforward P = pushforward(identity_subdivision(f), G);
  MultiplicityTable T = decompose(*P.F);
  check_sum_rule(*P.F, T);
  for (const auto& [c, g] : T.dims) {
    if (c == f->origin()) EXPECT_EQ(g, (GradedDims{{0, 1}}));
    else EXPECT_TRUE(prune(g).empty()) << c;
  }
}

TEST(Sheaf, PushforwardDecompositions) {
  // W tables of the edge split and of b(Delta^2); realize/to_free round trip
  struct Case {
    std::string name;
    GradedDims top;
  };
  for (const Case& k : {Case{"edge_split", {{2, 1}}}, Case{"bary_3", {{2, 1}, {4, 1}}}}) {
    Subdivision s;
    for (const auto& x : cone_subdivisions())
      if (x.name == k.name) s = x;
    auto G = std::make_shared<const SheafModel>(minimal_extension_sheaf(s.pi.source));
    Pushforward P = pushforward(s.pi, G);
    MultiplicityTable T = decompose(*P.F);
    check_sum_rule(*P.F, T);
    int top = s.pi.target->maximal_cones()[0];
    EXPECT_EQ(T.at(top), k.top) << k.name;
    EXPECT_EQ(T.at(s.pi.target->origin()), (GradedDims{{0, 1}})) << k.name;
    // pushforward stalk over the top cone is the sections over the whole fibre
    for (int d = 0; d <= 4; d += 2) {
      EXPECT_EQ(P.F->stalk_dim(top, d), P.fiber.at(top)->block(d).dim());
      Vec free(P.F->stalk_dim(top, d));
      for (size_t i = 0; i < free.size(); ++i) free[i] = int(i) + 1;
      EXPECT_EQ(P.to_free(top, d, P.to_section(top, d, free)), free);
    }
  }
}

TEST(Sheaf, PerverseTable) {
  for (const auto& s : cone_subdivisions()) {
    if (s.family != "edge") continue;
    auto G = std::make_shared<const SheafModel>(minimal_extension_sheaf(s.pi.source));
    Pushforward P = pushforward(s.pi, G);
    auto p = perverse_table(decompose(*P.F), *s.pi.target);
    for (auto [k, m] : p)
      if (m) EXPECT_EQ(k, 0) << s.name;
  }
}

TEST(Sheaf, CapTooLow) {
  try {
    minimal_extension_sheaf(square_cone(), 0, 0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CapTooLow);
  }
}
