#pragma once

// Hard Lefschetz / Hodge-Riemann checks on finite graded data, and the
// verifiers that assemble that data from fans, subdivisions and functions.

#include <map>
#include <string>
#include <vector>

#include "fanih/pairing.hpp"

namespace fanih {

// A graded space with a degree-2 operator and a form pairing degree d with
// degree 2c-d.  The sign on primitive classes of degree d is
// (-1)^((d - sign_shift)/2).
struct LefschetzData {
  std::string name;
  int center = 0;
  int sign_shift = 0;
  GradedDims dims;
  std::map<int, Matrix> op;    // d -> (dim d+2) x (dim d)
  std::map<int, Matrix> form;  // d -> (dim 2c-d) x (dim d)
  std::vector<std::string> hypotheses;
  std::vector<std::string> notes;

  int dim(int d) const { return dim_at(dims, d); }
  Matrix op_at(int d) const {
    auto it = op.find(d);
    return it != op.end() ? it->second : Matrix(dim(d + 2), dim(d));
  }
  Matrix form_at(int d) const {
    auto it = form.find(d);
    return it != form.end() ? it->second : Matrix(dim(2 * center - d), dim(d));
  }
  // L^i starting in degree d
  Matrix power(int d, int i) const {
    Matrix m = Matrix::identity(dim(d));
    for (int k = 0; k < i; ++k) m = op_at(d + 2 * k) * m;
    return m;
  }
  // degrees d <= center carrying something on either side
  std::vector<int> lower_degrees() const {
    std::set<int> s;
    for (auto [d, n] : dims) {
      if (n == 0) continue;
      int e = d <= center ? d : 2 * center - d;
      s.insert(e);
    }
    return {s.begin(), s.end()};
  }
};

struct LefschetzRow {
  int from = 0, to = 0, power = 0, rank = 0, required = 0;
  bool ok = false;
  std::vector<Vec> witness;  // kernel vectors when not injective
};

struct LefschetzReport {
  std::string name;
  std::vector<std::string> hypotheses;
  std::vector<std::string> notes;
  std::vector<LefschetzRow> rows;
  bool pass = true;
};

inline LefschetzReport check_hl(const LefschetzData& D) {
  LefschetzReport r;
  r.name = D.name.empty() ? "hl" : D.name;
  r.hypotheses = D.hypotheses;
  r.notes = D.notes;
  for (auto [d, n] : D.dims)
    if (n && d % 2) fail(ErrorKind::OddDegree, "odd degree in a Lefschetz space");
  for (int d : D.lower_degrees()) {
    if (d == D.center) continue;
    LefschetzRow row;
    row.from = d;
    row.to = 2 * D.center - d;
    row.power = D.center - d;
    Matrix m = D.power(d, row.power);
    row.rank = rank(m);
    row.required = D.dim(d);
    row.ok = D.dim(d) == D.dim(row.to) && row.rank == row.required;
    if (!row.ok) {
      Matrix k = kernel(m);
      for (int c = 0; c < k.cols(); ++c) row.witness.push_back(k.col(c));
    }
    r.pass = r.pass && row.ok;
    r.rows.push_back(row);
  }
  return r;
}

struct HodgeRiemannRow {
  int degree = 0, power = 0, dim = 0, prim_dim = 0, sign = 1;
  Inertia full, prim, expected;
  bool symmetric = true, ok = false;
};

struct HodgeRiemannReport {
  std::string name;
  std::vector<std::string> hypotheses;
  std::vector<std::string> notes;
  std::vector<HodgeRiemannRow> rows;
  bool pass = true;
};

inline int hr_sign(const LefschetzData& D, int d) {
  int e = d - D.sign_shift;
  require(e % 2 == 0, ErrorKind::OddDegree, "odd exponent in the Hodge-Riemann sign");
  return (e / 2) % 2 == 0 ? 1 : -1;
}

// The form Q(a, b) = <L^i a, b> on degree d = c - i.
inline Matrix hr_form(const LefschetzData& D, int d) {
  int i = D.center - d;
  Matrix li = D.power(d, i);         // (dim 2c-d) x (dim d)
  Matrix f = D.form_at(d);           // (dim 2c-d) x (dim d)
  return li.transpose() * f;
}

inline HodgeRiemannReport check_hr(const LefschetzData& D) {
  HodgeRiemannReport r;
  r.name = D.name.empty() ? "hr" : D.name;
  r.hypotheses = D.hypotheses;
  r.notes = D.notes;
  std::map<int, int> prim_dims;
  std::map<int, Matrix> prims;
  std::vector<int> lows = D.lower_degrees();
  for (int d : lows) {
    int i = D.center - d;
    Matrix k = kernel(D.power(d, i + 1));
    prims[d] = k;
    prim_dims[d] = k.cols();
  }
  for (int d : lows) {
    HodgeRiemannRow row;
    row.degree = d;
    row.power = D.center - d;
    row.dim = D.dim(d);
    row.prim_dim = prim_dims[d];
    row.sign = hr_sign(D, d);
    Matrix G = hr_form(D, d);
    row.symmetric = is_symmetric(G);
    row.full = row.symmetric ? inertia(G) : Inertia{};
    Matrix P = prims[d];
    Matrix Gp = P.transpose() * G * P;
    if (row.sign < 0) Gp = Gp.scaled(-1);
    row.prim = row.symmetric ? inertia(Gp) : Inertia{};
    for (int j = 0; d - 2 * j >= 0; ++j) {
      int e = d - 2 * j;
      auto it = prim_dims.find(e);
      if (it == prim_dims.end()) continue;
      (hr_sign(D, e) > 0 ? row.expected.positive : row.expected.negative) += it->second;
    }
    row.ok = row.symmetric && row.prim.positive == row.prim_dim && row.full.positive == row.expected.positive &&
             row.full.negative == row.expected.negative && row.full.zero == 0;
    r.pass = r.pass && row.ok;
    r.rows.push_back(row);
  }
  return r;
}

struct PrimitivePiece {
  int base_degree = 0;  // degree of the primitive space
  int power = 0;        // L^power applied
  Matrix basis;         // columns in the coordinates of degree base_degree + 2*power
};

struct PrimitiveDecomposition {
  std::map<int, Matrix> prim;
  std::vector<PrimitivePiece> pieces;
};

inline PrimitiveDecomposition primitive_decomposition(const LefschetzData& D) {
  require(check_hl(D).pass, ErrorKind::HLFailed, "operator is not a Lefschetz operator");
  PrimitiveDecomposition out;
  for (int d : D.lower_degrees()) {
    int i = D.center - d;
    Matrix k = kernel(D.power(d, i + 1));
    if (k.cols() == 0) continue;
    out.prim[d] = k;
    for (int j = 0; j <= i; ++j) out.pieces.push_back({d, j, D.power(d, j) * k});
  }
  return out;
}

// -------------------------------------------------------- data builders

inline std::map<int, Matrix> ih_operator(const FanIH& F, const PiecewiseLinear& l) {
  std::map<int, Matrix> m;
  for (int d = 0; d + 2 <= 2 * F.dim(); d += 2) m[d] = F.action(l, d);
  return m;
}

inline std::map<int, Matrix> combine(const std::map<int, Matrix>& a, const std::map<int, Matrix>& b,
                                     const Rational& s) {
  std::map<int, Matrix> out = a;
  for (auto& [d, m] : out) m = m + b.at(d).scaled(s);
  return out;
}

// IH(Phi) with an operator, centered at n, paired by the Poincare pairing.
inline LefschetzData ih_data(const FanIH& F, const std::map<int, Matrix>& op, std::string name) {
  require(F.complete(), ErrorKind::NotComplete, "Hodge-Riemann data needs a complete fan");
  LefschetzData D;
  D.name = std::move(name);
  D.center = F.dim();
  D.dims = F.dims();
  D.op = op;
  for (auto [d, n] : D.dims) D.form[d] = F.pairing_matrix(d);
  return D;
}

// W = image of IH(Phi, boundary) in IH(Phi) for a convex fan.
inline LefschetzData boundary_image_data(const FanIH& F, const std::map<int, Matrix>& op, std::string name) {
  WSpace W = boundary_image(F);
  LefschetzData D;
  D.name = std::move(name);
  D.center = W.center;
  D.dims = W.dims;
  for (auto& [d, b] : W.basis) {
    auto it = op.find(d);
    Matrix to = W.basis.count(d + 2) ? W.basis.at(d + 2) : Matrix(F.ih().dim(d + 2), 0);
    if (it != op.end()) D.op[d] = restrict_operator(it->second, b, to);
  }
  D.form = W.form;
  return D;
}

// W = l * IH(Phi) for a complete fan, centered at n+1, with
// B(l h1, l h2) = <l h1, h2>.
inline LefschetzData image_data(const FanIH& F, const std::map<int, Matrix>& lop, const std::map<int, Matrix>& op,
                                std::string name) {
  require(F.complete(), ErrorKind::NotComplete, "image data needs a complete fan");
  int n = F.dim();
  LefschetzData D;
  D.name = std::move(name);
  D.center = n + 1;
  D.sign_shift = 2;
  std::map<int, Matrix> basis;
  for (int d = 2; d <= 2 * n; d += 2) {
    Matrix b = column_space(lop.at(d - 2));
    if (b.cols()) {
      basis[d] = b;
      D.dims[d] = b.cols();
    }
  }
  for (auto& [d, b] : basis) {
    auto it = op.find(d);
    if (it == op.end()) continue;
    Matrix to = basis.count(d + 2) ? basis.at(d + 2) : Matrix(F.ih().dim(d + 2), 0);
    D.op[d] = restrict_operator(it->second, b, to);
  }
  for (auto& [d, b] : basis) {
    int e = 2 * n + 2 - d;  // partner degree in W
    if (!basis.count(e)) continue;
    const Matrix& l = lop.at(e - 2);         // IH^{e-2} -> IH^e
    Matrix p = F.pairing_matrix(d);          // IH^{2n-d} x IH^d, and e-2 = 2n-d
    auto x = solve(l, basis.at(e));
    require(x.has_value(), ErrorKind::KernelNotPreserved, "image basis has no preimage");
    Matrix k = kernel(l);
    require((k.transpose() * p * b).is_zero(), ErrorKind::PairingDegenerate, "form on l*IH is not well defined");
    D.form[d] = x->transpose() * p * b;
  }
  return D;
}

// ---------------------------------------------------------- verifiers

struct VerifyResult {
  std::vector<LefschetzReport> hl;
  std::vector<HodgeRiemannReport> hr;
  std::vector<std::string> notes;
  bool pass() const {
    for (const auto& r : hl)
      if (!r.pass) return false;
    for (const auto& r : hr)
      if (!r.pass) return false;
    return true;
  }
};

inline std::string cone_label(const Fan& f, int c) {
  std::string s = "{";
  for (size_t i = 0; i < f.cone(c).rays.size(); ++i) s += (i ? "," : "") + std::to_string(f.cone(c).rays[i]);
  return s + "}";
}

// Star of tau as a complete fan in V / Span tau, and l descended to it.
struct StarData {
  FanPtr fan;
  PiecewiseLinear l;
};

inline StarData star_of(const PiecewiseLinear& l, int tau) {
  FanPtr f = l.fan();
  if (tau == 0 && f->pointed()) return {f, l};
  QuotientFan q = quotient_star(f, tau);
  return {q.fan, l.descend(q, tau)};
}

// HL and HR for IH(star tau) of a complete fan with a strictly convex l.
// A refinement, if given, must refine the fan of l and is only used for tau = o.
inline VerifyResult verify_hl_hr(const PiecewiseLinear& l, int tau = 0, bool with_hr = true,
                                 const SubdivisionMap* refinement = nullptr) {
  const Fan& f = *l.fan();
  require(f.classify_support() == SupportClass::Complete, ErrorKind::NotComplete, "fan is not complete");
  StarData s = star_of(l, tau);
  require(check_convexity(s.l).strictly_convex, ErrorKind::NotStrictlyConvex, "l is not strictly convex");
  FanIH F(s.fan, s.fan == l.fan() ? refinement : nullptr);
  std::string name = "star" + cone_label(f, tau);
  LefschetzData D = ih_data(F, ih_operator(F, s.l), name);
  D.hypotheses = {"complete", "strictly_convex"};
  VerifyResult r;
  r.hl.push_back(check_hl(D));
  if (with_hr) r.hr.push_back(check_hr(D));
  return r;
}

// Same checks without certifying convexity (control cases).
inline VerifyResult verify_hl_hr_unchecked(const PiecewiseLinear& l, bool with_hr = true) {
  FanIH F(l.fan());
  LefschetzData D = ih_data(F, ih_operator(F, l), "uncertified");
  VerifyResult r;
  r.hl.push_back(check_hl(D));
  if (with_hr) r.hr.push_back(check_hr(D));
  return r;
}

// Convex fan, strictly convex lhat: HL and HR on the image of IH(Phi, boundary).
inline VerifyResult verify_convex(const PiecewiseLinear& lhat, const SubdivisionMap* refinement = nullptr) {
  FanPtr f = lhat.fan();
  SupportClass s = f->classify_support();
  require(s == SupportClass::Convex || s == SupportClass::Complete, ErrorKind::NotConvex, "fan is not convex");
  require(check_convexity(lhat).strictly_convex, ErrorKind::NotStrictlyConvex, "lhat is not strictly convex");
  FanIH F(f, refinement);
  LefschetzData D = boundary_image_data(F, ih_operator(F, lhat), "boundary_image");
  D.hypotheses = {"convex", "strictly_convex"};
  VerifyResult r;
  r.hl.push_back(check_hl(D));
  r.hr.push_back(check_hr(D));
  return r;
}

// Complete fan, l convex, lhat strictly convex: HL and HR on l * IH.
inline VerifyResult verify_complete(const PiecewiseLinear& l, const PiecewiseLinear& lhat,
                                    const SubdivisionMap* refinement = nullptr) {
  FanPtr f = l.fan();
  require(f->classify_support() == SupportClass::Complete, ErrorKind::NotComplete, "fan is not complete");
  require(check_convexity(l).convex, ErrorKind::NotConvex, "l is not convex");
  require(check_convexity(lhat).strictly_convex, ErrorKind::NotStrictlyConvex, "lhat is not strictly convex");
  FanIH F(f, refinement);
  LefschetzData D = image_data(F, ih_operator(F, l), ih_operator(F, lhat), "l_image");
  D.hypotheses = {"complete", "convex", "strictly_convex"};
  LinearityDomains dom = linearity_domains(l);
  if (dom.lineality_dim > 0)
    D.notes.push_back("strictness locus of l has lineality " + std::to_string(dom.lineality_dim) +
                      "; center taken as n - dim o + 1 of the pointed ambient");
  VerifyResult r;
  r.hl.push_back(check_hl(D));
  r.hr.push_back(check_hr(D));
  return r;
}

// ---------------------------------------------------- relative versions

struct RelativeResult {
  MultiplicityTable table;
  std::map<int, LefschetzReport> hl;        // per target cone (engine action)
  std::map<int, HodgeRiemannReport> hr;     // per target cone (fibre quotient)
  std::map<int, LefschetzReport> hl_fibre;  // HL recomputed on the fibre quotient
  bool pass() const {
    for (const auto& [c, r] : hl)
      if (!r.pass) return false;
    for (const auto& [c, r] : hr)
      if (!r.pass) return false;
    for (const auto& [c, r] : hl_fibre)
      if (!r.pass) return false;
    return true;
  }
};

// Multiplicity table of pi_* L^tau with its perverse offset.
struct RelativeSetup {
  Pushforward push;
  MultiplicityTable table;
};

inline RelativeSetup relative_setup(const SubdivisionMap& pi, int tau, int cap = -1) {
  if (cap < 0) cap = default_cap(*pi.source);
  auto G = std::make_shared<const SheafModel>(minimal_extension_sheaf(pi.source, tau, cap));
  RelativeSetup s{pushforward(pi, G, cap), {}};
  s.table = decompose(*s.push.F, pi.source->cone(tau).dim);
  check_sum_rule(*s.push.F, s.table);
  return s;
}

// W_sigma of pi_* L^tau realized inside the fibre: the quotient of
// star(tau) in the fibre fan of sigma, with lhat descended to it.
struct FibreQuotient {
  FanPtr fan;
  PiecewiseLinear lhat;
};

inline FibreQuotient fibre_quotient(const SubdivisionMap& pi, int sigma, int tau, const PiecewiseLinear& lhat) {
  FiberFan fib = fiber_fan(pi, sigma);
  PiecewiseLinear lf = lhat.restrict_to(fib);
  int tf = fib.from_source.at(tau);
  if (tf == 0) return {fib.fan, lf};
  QuotientFan q = quotient_star(fib.fan, tf);
  return {q.fan, lf.descend(q, tf)};
}

inline RelativeResult verify_relative(const SubdivisionMap& pi, int tau, const PiecewiseLinear& lhat,
                                      bool with_hr = true, bool certify = true) {
  if (certify)
    require(check_relative_convexity(lhat, pi), ErrorKind::NotRelativelyConvex,
            "lhat is not relatively strictly convex");
  RelativeSetup s = relative_setup(pi, tau);
  RelativeResult r;
  r.table = s.table;
  auto act = function_action(s.push, s.table, lhat);
  int dt = pi.source->cone(tau).dim;
  for (const auto& [sigma, dims] : s.table.dims) {
    LefschetzData D;
    D.name = "W" + cone_label(*pi.target, sigma);
    D.center = pi.target->cone(sigma).dim - dt;
    D.dims = dims;
    if (act.count(sigma)) D.op = act.at(sigma);
    D.hypotheses = {"relatively_strictly_convex"};
    r.hl[sigma] = check_hl(D);
    if (!with_hr) continue;
    FibreQuotient fq = fibre_quotient(pi, sigma, tau, lhat);
    FanIH F(fq.fan);
    LefschetzData E = boundary_image_data(F, ih_operator(F, fq.lhat), D.name);
    E.hypotheses = D.hypotheses;
    require(E.center == D.center && E.dims == D.dims, ErrorKind::OracleMismatch,
            "fibre multiplicity space disagrees with the decomposition");
    r.hr[sigma] = check_hr(E);
    r.hl_fibre[sigma] = check_hl(E);
  }
  return r;
}

// ------------------------------------------------------------ deformation

struct DeformationStep {
  Rational eps;
  bool hl = false, hr = false, hl_image = false, hr_image = false;
  bool pass() const { return hl && hr && hl_image && hr_image; }
};

struct DeformationResult {
  std::vector<DeformationStep> steps;
  std::optional<Rational> largest_passing;
  bool pass() const { return largest_passing.has_value(); }
};

inline std::vector<Rational> default_eps_schedule(int k = 8) {
  std::vector<Rational> v;
  Rational e(1, 4);
  for (int i = 2; i <= k; ++i) {
    v.push_back(e);
    e /= 2;
  }
  return v;
}

// l strictly convex on the complete target, lhat relatively strictly convex:
// l + eps^2 lhat on H = IH(star tau) of the source, and on l * H.
inline DeformationResult verify_deformation(const SubdivisionMap& pi, int tau, const PiecewiseLinear& l,
                                            const PiecewiseLinear& lhat, const std::vector<Rational>& eps) {
  require(pi.target->classify_support() == SupportClass::Complete, ErrorKind::NotComplete, "fan is not complete");
  require(check_convexity(l).strictly_convex, ErrorKind::NotStrictlyConvex, "l is not strictly convex");
  require(check_relative_convexity(lhat, pi), ErrorKind::NotRelativelyConvex,
          "lhat is not relatively strictly convex");
  PiecewiseLinear lp = l.pullback(pi);
  FanPtr qf = pi.source;
  PiecewiseLinear ql = lp, qh = lhat;
  if (tau != 0) {
    QuotientFan q = quotient_star(pi.source, tau);
    qf = q.fan;
    ql = lp.descend(q, tau);
    qh = lhat.descend(q, tau);
  }
  FanIH F(qf);
  auto A = ih_operator(F, ql);
  auto B = ih_operator(F, qh);
  DeformationResult out;
  for (const Rational& e : eps) {
    DeformationStep st;
    st.eps = e;
    auto op = combine(A, B, e * e);
    LefschetzData D = ih_data(F, op, "deform");
    st.hl = check_hl(D).pass;
    st.hr = check_hr(D).pass;
    LefschetzData E = image_data(F, A, op, "deform_image");
    st.hl_image = check_hl(E).pass;
    st.hr_image = check_hr(E).pass;
    if (st.pass() && (!out.largest_passing || e > *out.largest_passing)) out.largest_passing = e;
    out.steps.push_back(st);
  }
  return out;
}

}  // namespace fanih
