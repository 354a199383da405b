#pragma once

// The twelve acceptance suites.  Each one writes a deterministic transcript
// (no timings, no addresses) and returns pass/fail; the acceptance binary
// prints one line per suite and compares two full runs for determinism.

#include <chrono>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "corpus.hpp"
#include "fanih/combinatorics.hpp"
#include "oracles.hpp"

namespace suites {

using namespace corpus;

// Everything is exact, so every comparison is equality.  Kept as named
// constants so the acceptance report can print them.
inline constexpr long kTolerance = 0;
inline const Rational kMaxPassingEps(1, 4);
inline constexpr int kBilinearityMultipliers = 5;
inline constexpr unsigned kSeed = 20240611;
inline constexpr int kAllTauMaxDim = 3;  // relative checks over every tau up to this dimension

struct Outcome {
  bool pass = true;
  std::string summary;
};

// ------------------------------------------------------------ shared oracles

inline std::vector<oracle::Row> rays_of(const Fan& f) { return {f.rays().begin(), f.rays().end()}; }

inline std::vector<oracle::RaySet> maximal_sets(const Fan& f) {
  std::vector<oracle::RaySet> mx;
  for (int m : f.maximal_cones()) mx.push_back(f.cone(m).rays);
  return mx;
}

inline GradedDims poly_dims(const oracle::Poly& p) {
  GradedDims g;
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i]) g[2 * int(i)] = int(p[i]);
  return g;
}

// h-vector of a complete simplicial fan straight from its maximal ray sets
inline GradedDims simplicial_h(const Fan& f) {
  return poly_dims(oracle::h_vector(oracle::all_subsets(maximal_sets(f)), f.ambient_dim()));
}

inline GradedDims toric_h(const Fan& f) {
  return poly_dims(oracle::toric_h(rays_of(f), maximal_sets(f), f.ambient_dim()));
}

// Stanley's local h of the part of pi lying over the simplicial cone sigma.
inline GradedDims stanley(const SubdivisionMap& pi, int sigma) {
  const Fan& t = *pi.target;
  const Fan& s = *pi.source;
  std::vector<oracle::Row> target;
  for (int r : t.cone(sigma).rays) target.push_back(t.ray(r));
  std::vector<int> fib = pi.fiber(sigma);
  std::vector<oracle::RaySet> mx;
  for (int c : fib) {
    bool top = true;
    for (int d : fib)
      if (d != c && s.is_face(c, d)) top = false;
    if (top) mx.push_back(s.cone(c).rays);
  }
  return poly_dims(oracle::local_h(target, rays_of(s), mx));
}

// Expected inertia of (-1)^k <l^(n-2k) x, y> on degree 2k from the graded
// dimensions alone: primitive pieces of degree 2j contribute with sign (-1)^(k-j).
inline Inertia signature_formula(const GradedDims& h, int n, int d) {
  Inertia in;
  int k = d / 2;
  for (int j = 0; j <= k; ++j) {
    int p = dim_at(h, 2 * j) - (j ? dim_at(h, 2 * j - 2) : 0);
    if (2 * j > n) break;
    ((k - j) % 2 == 0 ? in.positive : in.negative) += p;
  }
  return in;
}

inline bool rows_match_signature(const HodgeRiemannReport& r, const GradedDims& h, int center) {
  for (const auto& row : r.rows) {
    Inertia e = signature_formula(h, center, row.degree);
    // full inertia is of the unsigned form; flip for odd k
    Inertia full = row.full;
    if (row.sign < 0) std::swap(full.positive, full.negative);
    if (full.positive != e.positive || full.negative != e.negative || full.zero != 0) return false;
  }
  return true;
}

inline std::string tf(bool b) { return b ? "ok" : "FAIL"; }

// Random piecewise linear multiplier: random ray values where the fan is
// simplicial, otherwise a random global form plus a random multiple of `l`.
inline PiecewiseLinear random_multiplier(const PiecewiseLinear& l, std::mt19937& rng) {
  FanPtr f = l.fan();
  auto rq = [&] {
    Rational x(long(rng() % 7) - 3, long(1 + rng() % 3));
    x.canonicalize();
    return x;
  };
  if (f->simplicial()) {
    Vec v(f->num_rays());
    for (auto& x : v) x = rq();
    return PiecewiseLinear::from_ray_values(f, v);
  }
  Vec u(f->ambient_dim());
  for (auto& x : u) x = rq();
  Rational c = rq();
  std::map<int, Vec> forms;
  for (const auto& [m, w] : l.forms()) {
    Vec s = u;
    for (size_t i = 0; i < s.size(); ++i) s[i] += c * w[i];
    forms[m] = s;
  }
  return PiecewiseLinear(f, forms);
}

// ------------------------------------------------------------------ suites

// 1. IH of complete simplicial fans against the f -> h transformation.
inline Outcome simplicial_ih(std::ostream& log) {
  Outcome o;
  int n = 0;
  for (const auto& c : complete_simplicial()) {
    FanIH F(c.fan);
    GradedDims got = F.dims(), want = simplicial_h(*c.fan);
    bool ok = got == want;
    o.pass &= ok;
    ++n;
    log << "c1 " << c.name << " dim=" << c.fan->ambient_dim() << " cones=" << c.fan->num_cones()
        << " ih=" << format_dims(got) << " h=" << format_dims(want) << " " << tf(ok) << "\n";
  }
  o.summary = std::to_string(n) + " complete simplicial fans";
  return o;
}

// IH(Phi-hat) minus the contributions of the nonzero cones of the
// decomposition of the pushforward, with IH(Phi-hat) from the h-vector oracle.
inline GradedDims subtraction_path(FanPtr f, std::ostream& log) {
  SubdivisionMap r = simplicial_refinement(f, RefinementKind::Minimal);
  auto G = std::make_shared<const SheafModel>(minimal_extension_sheaf(r.source));
  Pushforward P = pushforward(r, G);
  MultiplicityTable T = decompose(*P.F);
  std::map<int, long> acc;
  for (auto [d, k] : simplicial_h(*r.source)) acc[d] += k;
  for (const auto& [sigma, g] : T.dims) {
    if (sigma == f->origin()) continue;
    GradedDims star = FanIH(quotient_star(f, sigma).fan).dims();
    for (auto [d, k] : g)
      for (auto [e, m] : star) acc[d + e] -= long(k) * m;
    log << "c2   W" << cone_label(*f, sigma) << "=" << format_dims(g) << " IH(star)=" << format_dims(star) << "\n";
  }
  GradedDims out;
  for (auto [d, k] : acc)
    if (k) out[d] = int(k);
  return out;
}

// 2. Nonsimplicial IH: the cube's face fan.
inline Outcome nonsimplicial_ih(std::ostream& log) {
  Outcome o;
  FanPtr c = cube();
  GradedDims engine = FanIH(c).dims();
  GradedDims sub = subtraction_path(c, log);
  GradedDims g = toric_h(*c);
  bool cube_ok = engine == sub && engine == g;
  log << "c2 cube engine=" << format_dims(engine) << " subtraction=" << format_dims(sub)
      << " toric_h=" << format_dims(g) << " " << tf(cube_ok) << "\n";
  FanPtr oct = cross_polytope(3);
  GradedDims oe = FanIH(oct).dims();
  GradedDims want{{0, 1}, {2, 3}, {4, 3}, {6, 1}};
  bool oct_ok = oe == want && simplicial_h(*oct) == want;
  log << "c2 octahedron engine=" << format_dims(oe) << " expected=" << format_dims(want) << " " << tf(oct_ok) << "\n";
  // informational: a nonsimplicial cone that is not complete
  GradedDims sq = FanIH(square_cone()).dims();
  log << "c2 square_cone ih=" << format_dims(sq) << "\n";
  o.pass = cube_ok && oct_ok;
  o.summary = "cube IH=" + format_dims(engine) + " (subtraction path and toric g/h agree; (1,3,3,1) is the octahedron)";
  return o;
}

// 3. Decomposition tables against Stanley's local h, on every cone.
inline Outcome local_h(std::ostream& log) {
  Outcome o;
  int n = 0;
  std::map<std::string, GradedDims> pinned = {
      {"edge_split", {{2, 1}}},
      {"bary_2", {{2, 1}}},
      {"stellar_3", {{2, 1}, {4, 1}}},
      {"bary_3", {{2, 1}, {4, 1}}},
  };
  for (const auto& s : cone_subdivisions()) {
    auto G = std::make_shared<const SheafModel>(minimal_extension_sheaf(s.pi.source));
    Pushforward P = pushforward(s.pi, G);
    MultiplicityTable T = decompose(*P.F);
    check_sum_rule(*P.F, T);
    bool ok = true;
    for (int sigma = 0; sigma < s.pi.target->num_cones(); ++sigma) {
      GradedDims want = stanley(s.pi, sigma);
      GradedDims got = T.at(sigma);
      ok &= got == want;
      if (!(got == want))
        log << "c3   " << s.name << " cone" << cone_label(*s.pi.target, sigma) << " W=" << format_dims(got)
            << " oracle=" << format_dims(want) << "\n";
    }
    int top = s.pi.target->maximal_cones()[0];
    auto pin = pinned.find(s.name);
    if (pin != pinned.end()) ok &= T.at(top) == pin->second;
    // the library's own face-count formula must agree too
    ok &= local_h_dims(stanley_local_h(s.pi, top)) == T.at(top);
    o.pass &= ok;
    ++n;
    log << "c3 " << s.name << " W_top=" << format_dims(T.at(top)) << " " << tf(ok) << "\n";
  }
  o.pass &= n >= 10;
  o.summary = std::to_string(n) + " subdivisions of simplicial cones";
  return o;
}

// A second simplicial refinement: barycentric up to dimension 3; in dimension
// 4 that gets large, so one extra stellar subdivision of a top cone instead.
inline SubdivisionMap second_refinement(const SubdivisionMap& minimal) {
  FanPtr f = minimal.target;
  if (f->ambient_dim() <= 3) return simplicial_refinement(f, RefinementKind::Barycentric);
  FanPtr src = minimal.source;
  int top = src->maximal_cones()[0];
  return make_subdivision(star_subdivision(src, top, src->barycenter(top)).source, f);
}

// 4. Poincare pairing properties on one quasi-convex fan.
inline bool poincare_instance(const std::string& name, const PiecewiseLinear& l, bool refine, std::mt19937& rng,
                              std::ostream& log) {
  FanPtr f = l.fan();
  FanIH F(f);
  int n = F.dim();
  bool nondeg = true, sym = true, ortho = true, bilin = true, refind = true;
  for (int d = 0; d <= 2 * n; d += 2) {
    Matrix P = F.pairing_matrix(d);
    nondeg &= P.rows() == P.cols() && rank(P) == P.rows();
    // <h, iota(h')> = <h', iota(h)> on relative classes
    Matrix a = P * F.iota(d);
    Matrix b = F.pairing_matrix(2 * n - d) * F.iota(2 * n - d);
    sym &= b == a.transpose();
  }
  // disjoint supports: degree 2 sections vanishing off star(rho) against
  // degree 2n-2 sections vanishing on star(rho)
  const SheafModel& L = F.sheaf();
  int rho = -1;
  for (int c = 0; c < f->num_cones(); ++c)
    if (f->cone(c).dim == f->lineality_dim() + 1) {
      rho = c;
      break;
    }
  if (rho >= 0 && n >= 1) {
    std::vector<int> star = f->star(rho), off;
    for (int c = 0; c < f->num_cones(); ++c)
      if (!std::binary_search(star.begin(), star.end(), c)) off.push_back(c);
    SectionSpace A(L, f->all_cones(), 2, off);
    SectionSpace B(L, f->all_cones(), 2 * n - 2, star);
    const SectionBlock& ba = A.block(2);
    const SectionBlock& bb = B.block(2 * n - 2);
    int nonzero_a = 0;
    for (const auto& x : ba.basis) nonzero_a += !x.empty();
    ortho &= nonzero_a > 0;
    for (const auto& x : ba.basis)
      for (const auto& y : bb.basis) ortho &= F.pairing().pair(ba, x, bb, y) == 0;
  }
  // A-bilinearity: <f a, b> = <a, f b>
  for (int k = 0; k < kBilinearityMultipliers; ++k) {
    PiecewiseLinear m = random_multiplier(l, rng);
    for (int e = 0; e + 2 <= 2 * n; e += 2) {
      int d = 2 * n - e - 2;
      Matrix lhs = F.action_rel(m, d).transpose() * F.pairing_matrix(e);
      Matrix rhs = F.pairing_matrix(e + 2) * F.action(m, e);
      bilin &= lhs == rhs;
    }
  }
  if (refine) {
    SubdivisionMap mr = simplicial_refinement(f, RefinementKind::Minimal);
    SubdivisionMap other = second_refinement(mr);
    refind &= mr.source->num_cones() != other.source->num_cones();
    FanIH Fm(f, &mr), Fo(f, &other);
    for (int d = 0; d <= 2 * n; d += 2) refind &= Fm.pairing_matrix(d) == Fo.pairing_matrix(d);
  }
  bool ok = nondeg && sym && ortho && bilin && refind;
  log << "c4 " << name << " nondegenerate=" << tf(nondeg) << " symmetric=" << tf(sym) << " orthogonal=" << tf(ortho)
      << " bilinear=" << tf(bilin) << " refinement=" << (refine ? tf(refind) : "skipped") << "\n";
  return ok;
}

inline Outcome poincare(std::ostream& log) {
  Outcome o;
  std::mt19937 rng(kSeed);
  int n = 0, refined = 0;
  auto run = [&](const std::string& name, const PiecewiseLinear& l) {
    // a 1-dimensional fan has only the one refinement
    bool refine = l.fan()->ambient_dim() >= 2;
    o.pass &= poincare_instance(name, l, refine, rng, log);
    ++n;
    refined += refine;
  };
  for (const auto& c : complete_simplicial()) run(c.name, c.l);
  FanPtr c = cube();
  run("cube", cube_function(c));
  for (const auto& v : convex_fans()) run(v.name, v.lhat);
  o.summary = std::to_string(n) + " quasi-convex fans, " + std::to_string(refined) + " with two refinements";
  return o;
}

// 5. HL/HR on complete fans, all stars, signature formula, linear control.
inline Outcome hl_hr(std::ostream& log) {
  Outcome o;
  int n = 0, stars = 0;
  std::vector<Complete> fans = complete_simplicial();
  FanPtr c = cube();
  fans.push_back({"cube", c, cube_function(c)});
  for (const auto& cf : fans) {
    bool ok = true;
    for (int tau = 0; tau < cf.fan->num_cones(); ++tau) {
      VerifyResult r = verify_hl_hr(cf.l, tau);
      StarData s = star_of(cf.l, tau);
      GradedDims h = FanIH(s.fan).dims();
      int center = s.fan->ambient_dim() - s.fan->lineality_dim();
      bool sig = rows_match_signature(r.hr.at(0), h, center);
      ok &= r.pass() && sig;
      ++stars;
    }
    o.pass &= ok;
    ++n;
    log << "c5 " << cf.name << " stars=" << cf.fan->num_cones() << " " << tf(ok) << "\n";
  }
  // control: a global linear function is not strictly convex and HL fails
  bool control = true;
  for (FanPtr f : {cross_polytope(2), cross_polytope(3), simplex_fan(3)}) {
    Vec u(f->ambient_dim());
    for (int i = 0; i < f->ambient_dim(); ++i) u[i] = i + 1;
    PiecewiseLinear lin = PiecewiseLinear::linear(f, u);
    bool rejected = false;
    try {
      verify_hl_hr(lin);
    } catch (const Error& e) {
      rejected = e.kind() == ErrorKind::NotStrictlyConvex;
    }
    VerifyResult r = verify_hl_hr_unchecked(lin);
    bool hl_fails = !r.hl.at(0).pass;
    control &= rejected && hl_fails;
    log << "c5 control linear on dim " << f->ambient_dim() << " rejected=" << tf(rejected)
        << " hl_fails=" << tf(hl_fails) << "\n";
  }
  o.pass &= control;
  o.summary = std::to_string(n) + " complete fans, " + std::to_string(stars) + " star variants, linear control fails HL";
  return o;
}

// 6. Relative HL/HR for L on the source and for every L^tau (dim <= 3).
inline Outcome relative(std::ostream& log) {
  Outcome o;
  int n = 0, checks = 0;
  auto run = [&](const std::string& name, const SubdivisionMap& pi, const PiecewiseLinear& lhat) {
    int lim = pi.source->ambient_dim() <= kAllTauMaxDim ? pi.source->num_cones() : 1;
    bool ok = true;
    for (int tau = 0; tau < lim; ++tau) {
      ok &= verify_relative(pi, tau, lhat).pass();
      ++checks;
    }
    o.pass &= ok;
    ++n;
    log << "c6 " << name << " taus=" << lim << " " << tf(ok) << "\n";
  };
  for (const auto& s : cone_subdivisions()) run(s.name, s.pi, s.lhat);
  for (const auto& t : complete_triples()) run(t.name, t.pi, t.lhat);
  // control: a pulled-back function is relatively linear, so RHL fails
  // wherever the decomposition has a nonzero fibre contribution
  bool control = true;
  for (const auto& s : cone_subdivisions()) {
    if (s.family == "edge" || s.pi.source->ambient_dim() > 3) continue;
    PiecewiseLinear pb = ones(s.pi.target).pullback(s.pi);
    RelativeResult r = verify_relative(s.pi, 0, pb, true, false);
    bool hl_fails = false;
    for (const auto& [c, rep] : r.hl) hl_fails |= !rep.pass;
    for (const auto& [c, rep] : r.hl_fibre) hl_fails |= !rep.pass;
    control &= hl_fails;
    log << "c6 control pullback on " << s.name << " rhl_fails=" << tf(hl_fails) << "\n";
  }
  o.pass &= control;
  o.summary = std::to_string(n) + " subdivisions, " + std::to_string(checks) + " (subdivision, tau) checks, pullback control fails RHL";
  return o;
}

// 7. Convex non-complete fans.
inline Outcome convex(std::ostream& log) {
  Outcome o;
  int n = 0;
  for (const auto& c : convex_fans()) {
    bool noncomplete = c.fan->classify_support() == SupportClass::Convex;
    bool ok = noncomplete && verify_convex(c.lhat).pass();
    o.pass &= ok;
    ++n;
    log << "c7 " << c.name << " ih=" << format_dims(FanIH(c.fan).dims()) << " " << tf(ok) << "\n";
  }
  o.pass &= n >= 5;
  o.summary = std::to_string(n) + " convex non-complete fans";
  return o;
}

// 8. Complete fans with l convex but not strictly convex.
inline Outcome complete(std::ostream& log) {
  Outcome o;
  int n = 0;
  for (const auto& t : complete_triples()) {
    PiecewiseLinear l = t.l.pullback(t.pi);
    PiecewiseLinear lh = lift_strict(t.pi, t.l, t.lhat);
    ConvexityFlags cf = check_convexity(l);
    bool nonstrict = cf.convex && !cf.strictly_convex;
    bool ok = nonstrict && verify_complete(l, lh).pass();
    // l = lhat degenerates to plain HL/HR
    bool degenerate = verify_complete(lh, lh).pass() == verify_hl_hr(lh).pass() && verify_hl_hr(lh).pass();
    o.pass &= ok && degenerate;
    ++n;
    log << "c8 " << t.name << " nonstrict=" << tf(nonstrict) << " complete=" << tf(ok)
        << " l=lhat=" << tf(degenerate) << "\n";
  }
  o.pass &= n >= 5;
  o.summary = std::to_string(n) + " (fan, l, lhat) triples";
  return o;
}

// 9. Deformation l + eps^2 lhat.
inline Outcome deformation(std::ostream& log) {
  Outcome o;
  int n = 0;
  for (const auto& t : complete_triples()) {
    DeformationResult d = verify_deformation(t.pi, 0, t.l, t.lhat, default_eps_schedule());
    bool ok = d.largest_passing.has_value() && *d.largest_passing <= kMaxPassingEps;
    o.pass &= ok;
    ++n;
    log << "c9 " << t.name << " largest_passing_eps=" << (d.largest_passing ? format_rational(*d.largest_passing) : "-")
        << " " << tf(ok) << "\n";
  }
  o.summary = std::to_string(n) + " triples, passing eps <= " + format_rational(kMaxPassingEps);
  return o;
}

// 10. Semi-smallness.
inline Outcome semismall(std::ostream& log) {
  Outcome o;
  for (const auto& s : cone_subdivisions()) {
    if (s.family == "star") continue;
    Smallness sm = detect_semismall(s.pi);
    bool ok;
    std::string perv;
    if (s.family == "edge") {
      auto G = std::make_shared<const SheafModel>(minimal_extension_sheaf(s.pi.source));
      Pushforward P = pushforward(s.pi, G);
      auto p = perverse_table(decompose(*P.F), *s.pi.target);
      bool concentrated = true;
      for (auto [k, m] : p) {
        concentrated &= k == 0 || m == 0;
        perv += " " + std::to_string(k) + ":" + std::to_string(m);
      }
      ok = sm.semismall && concentrated;
    } else {
      ok = !sm.semismall;
    }
    o.pass &= ok;
    log << "c10 " << s.name << " family=" << s.family << " semismall=" << sm.semismall << " perverse=" << perv << " "
        << tf(ok) << "\n";
  }
  o.summary = "edge family semi-small with p=0 table; barycentric family not semi-small";
  return o;
}

// 11. Kunneth.
inline Outcome kunneth(std::ostream& log) {
  Outcome o;
  int n = 0;
  for (const auto& p : products()) {
    auto f = std::make_shared<const Fan>(product_fan(*p.a.fan, *p.b.fan));
    GradedDims got = FanIH(f).dims();
    GradedDims want = convolve(FanIH(p.a.fan).dims(), FanIH(p.b.fan).dims());
    PiecewiseLinear l = product_function(f, *p.a.fan, p.a.l, *p.b.fan, p.b.l);
    bool lef = verify_hl_hr(l).pass();
    bool ok = got == want && lef;
    o.pass &= ok;
    ++n;
    log << "c11 " << p.name << " ih=" << format_dims(got) << " convolution=" << format_dims(want)
        << " hl_hr=" << tf(lef) << " " << tf(ok) << "\n";
  }
  o.summary = std::to_string(n) + " products";
  return o;
}

struct Suite {
  int id;
  std::string name;
  std::function<Outcome(std::ostream&)> run;
};

inline std::vector<Suite> all_suites() {
  return {{1, "simplicial IH vs f->h", simplicial_ih},
          {2, "nonsimplicial IH (cube)", nonsimplicial_ih},
          {3, "local h vs Stanley", local_h},
          {4, "Poincare pairing", poincare},
          {5, "HL/HR complete fans", hl_hr},
          {6, "relative HL/HR", relative},
          {7, "convex fans", convex},
          {8, "complete fans, l convex", complete},
          {9, "deformation", deformation},
          {10, "semi-smallness", semismall},
          {11, "Kunneth", kunneth}};
}

}  // namespace suites
