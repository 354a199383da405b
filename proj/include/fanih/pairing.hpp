#pragma once

// Brion evaluation on simplicial fans and the Poincare pairing on
// intersection cohomology of quasi-convex fans, computed by realizing classes
// as piecewise polynomials on a simplicial refinement.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "fanih/sheaf.hpp"

namespace fanih {

// ------------------------------------------------------------ evaluation

struct EvaluationContext {
  FanPtr fan;
  std::vector<int> tops;             // full-dimensional cones
  std::map<int, Rational> absdet;    // |det(v_1..v_n)| of the stored rays
  std::map<int, Matrix> dual;        // rows: dual forms u_i (ambient coordinates)
  std::vector<Vec> points;           // evaluation points off every wall hyperplane
  std::map<int, std::vector<Vec>> coords;     // dual coordinates of each point
  std::map<int, std::vector<Rational>> weight;  // 1 / (|det| prod u_i(point))
};

inline EvaluationContext make_evaluation_context(FanPtr fan, int npoints = 2) {
  require(fan->pointed(), ErrorKind::NotPointed, "evaluation needs a pointed fan");
  int n = fan->ambient_dim();
  EvaluationContext ctx;
  ctx.fan = fan;
  for (int m : fan->maximal_cones()) {
    if (fan->cone(m).dim != n) continue;
    require(fan->simplicial(m), ErrorKind::RefinementNotSimplicial, "evaluation needs simplicial top cones");
    ctx.tops.push_back(m);
    Matrix v = fan->cone(m).span_basis.transpose();  // columns: rays
    ctx.absdet[m] = abs(determinant(v));
    ctx.dual[m] = inverse(v);
  }
  // points on the moment curve
  for (long t = 2; int(ctx.points.size()) < npoints; ++t) {
    Vec x(n);
    Rational p = 1;
    for (int i = 0; i < n; ++i) {
      x[i] = p;
      p *= t;
    }
    bool ok = true;
    for (int m : ctx.tops) {
      Vec y = ctx.dual[m] * x;
      for (const auto& c : y) ok = ok && c != 0;
    }
    if (ok) ctx.points.push_back(x);
  }
  for (int m : ctx.tops)
    for (const auto& x : ctx.points) {
      Vec y = ctx.dual[m] * x;
      Rational prod = ctx.absdet[m];
      for (const auto& c : y) prod *= c;
      ctx.coords[m].push_back(y);
      ctx.weight[m].push_back(1 / prod);
    }
  return ctx;
}

// Exact sum of f_sigma / (|det| prod u_i) over the top cones, over a common
// denominator.  f is given per top cone in the cone's dual coordinates,
// homogeneous of the given (even) degree.
inline SparsePoly brion_evaluate_exact(const EvaluationContext& ctx, const std::map<int, Vec>& f, int degree) {
  check_even(degree);
  int n = ctx.fan->ambient_dim();
  int e = degree / 2;
  std::vector<Vec> planes;
  std::map<int, std::vector<std::pair<int, Rational>>> factors;  // top -> (plane, scalar)
  for (int m : ctx.tops)
    for (int i = 0; i < n; ++i) {
      Vec u = ctx.dual.at(m).row(i);
      Vec l = normalize_direction(u);
      int k = 0;
      while (l[k] == 0) ++k;
      auto it = std::find(planes.begin(), planes.end(), l);
      int idx = int(it - planes.begin());
      if (it == planes.end()) planes.push_back(l);
      factors[m].emplace_back(idx, u[k] / l[k]);
    }
  SparsePoly total;
  for (int m : ctx.tops) {
    auto it = f.find(m);
    if (it == f.end() || is_zero(it->second)) continue;
    Vec amb = linear_substitution(ctx.dual.at(m), e) * it->second;
    SparsePoly term = sparse_from_dense(n, e, amb);
    Rational scale = ctx.absdet.at(m);
    std::vector<bool> used(planes.size());
    for (auto [idx, c] : factors[m]) {
      used[idx] = true;
      scale *= c;
    }
    for (size_t p = 0; p < planes.size(); ++p)
      if (!used[p]) term = sparse_mul(term, sparse_linear(planes[p]));
    sparse_add(total, term, 1 / scale);
  }
  for (const auto& l : planes) {
    auto q = sparse_divide_linear(total, l);
    require(q.has_value(), ErrorKind::DenominatorNotCleared, "Brion sum is not a polynomial");
    total = *q;
  }
  return total;
}

// Top-degree evaluation: evaluate at two points off the arrangement and fall
// back to the exact sum when they disagree.
inline Rational brion_evaluate(const EvaluationContext& ctx, const std::map<int, Vec>& f, int degree) {
  int n = ctx.fan->ambient_dim();
  require(degree == 2 * n, ErrorKind::DimensionMismatch, "top-degree evaluation needs degree 2n");
  std::vector<Rational> val(ctx.points.size());
  for (int m : ctx.tops) {
    auto it = f.find(m);
    if (it == f.end()) continue;
    for (size_t p = 0; p < ctx.points.size(); ++p)
      val[p] += poly_eval(n, n, it->second, ctx.coords.at(m)[p]) * ctx.weight.at(m)[p];
  }
  bool agree = true;
  for (size_t p = 1; p < val.size(); ++p) agree = agree && val[p] == val[0];
  if (agree) return val.empty() ? Rational(0) : val[0];
  SparsePoly s = brion_evaluate_exact(ctx, f, degree);
  return s.empty() ? Rational(0) : s.begin()->second;
}

// ------------------------------------------------------------ refinements

enum class RefinementKind { Minimal, Barycentric };

// Minimal: star subdivide only the nonsimplicial cones, largest first (the
// identity on simplicial fans).  Barycentric: every cone of dimension >= 2.
inline SubdivisionMap simplicial_refinement(FanPtr fan, RefinementKind kind) {
  if (kind == RefinementKind::Barycentric) return barycentric_subdivision(fan).map;
  require(fan->pointed(), ErrorKind::NotPointed, "refinement needs a pointed fan");
  std::vector<int> order;
  for (int c = 0; c < fan->num_cones(); ++c)
    if (!fan->simplicial(c)) order.push_back(c);
  if (order.empty()) return identity_subdivision(fan);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fan->cone(a).dim > fan->cone(b).dim; });
  FanPtr cur = fan;
  for (int c : order) {
    int id = cur->find_cone(fan->cone(c).rays);
    require(id >= 0, ErrorKind::InvalidInput, "cone vanished during refinement");
    cur = star_subdivision(cur, id, fan->barycenter(c)).source;
  }
  require(cur->simplicial(), ErrorKind::RefinementNotSimplicial, "refinement is not simplicial");
  return make_subdivision(cur, fan);
}

// --------------------------------------------------------------- embedding

// A morphism L -> pi_* A' (A' the polynomial sheaf of the simplicial source),
// the identity at the origin, built by lifting generators cone by cone.
class Embedding {
 public:
  Embedding(SheafPtr L, SubdivisionMap pi) : L_(std::move(L)), pi_(std::move(pi)) {
    require(pi_.source->simplicial(), ErrorKind::RefinementNotSimplicial, "refinement is not simplicial");
    A_ = std::make_shared<SheafModel>(structure_sheaf(pi_.source, L_->cap()));
    const Fan& tgt = *pi_.target;
    phi_.resize(tgt.num_cones());
    for (int s = 0; s < tgt.num_cones(); ++s) build(s);
  }

  const SubdivisionMap& map() const { return pi_; }
  const SheafModel& source_sheaf() const { return *A_; }

  // phi(x) on the source cone nu (in nu's coordinates) for x in L_sigma^d.
  Vec at(int sigma, int d, const Vec& x, int nu) const {
    int nv = pi_.source->cone(nu).dim;
    Vec out(num_monomials(nv, d / 2));
    const auto& g = L_->generators(sigma);
    for (size_t i = 0; i < g.size(); ++i) {
      if (g[i] > d) continue;
      int e = (d - g[i]) / 2;
      int off = L_->generator_offset(sigma, int(i), d);
      int len = num_monomials(L_->nvars(sigma), e);
      Vec q(x.begin() + off, x.begin() + off + len);
      if (is_zero(q)) continue;
      Vec qr = substitution(sigma, nu, e) * q;
      Vec t = poly_mul(nv, e, qr, g[i] / 2, phi_[sigma][i].at(nu));
      for (size_t k = 0; k < out.size(); ++k) out[k] += t[k];
    }
    return out;
  }

 private:
  const Matrix& substitution(int sigma, int nu, int e) const {
    auto key = std::make_tuple(sigma, nu, e);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = subst_.find(key);
    if (it != subst_.end()) return it->second;
    const Cone& c = pi_.source->cone(nu);
    Matrix forms(L_->nvars(sigma), c.dim);
    for (int i = 0; i < c.span_basis.rows(); ++i) {
      Vec y = pi_.target->span_coordinates(sigma, c.span_basis.row(i));
      for (int j = 0; j < forms.rows(); ++j) forms(j, i) = y[j];
    }
    return subst_.emplace(key, linear_substitution(forms, e)).first->second;
  }

  void build(int s) {
    const auto& g = L_->generators(s);
    phi_[s].resize(g.size());
    std::vector<int> fib = pi_.fiber(s);
    if (pi_.target->cone(s).dim == 0) {
      // the origin: L = A' = Q in degree 0
      for (size_t j = 0; j < g.size(); ++j)
        for (int nu : fib) phi_[s][j][nu] = Vec{1};
      return;
    }
    std::map<int, SectionBlock> blocks;
    for (size_t j = 0; j < g.size(); ++j) {
      int d = g[j];
      if (!blocks.count(d)) blocks[d] = compute_sections(*A_, fib, d);
      const SectionBlock& b = blocks[d];
      Vec e(L_->stalk_dim(s, d));
      e[L_->generator_offset(s, int(j), d)] = 1;
      std::vector<Vec> rows;
      Vec rhs;
      std::map<int, Matrix> res;
      for (int nu : fib) {
        int rho = pi_.assignment[nu];
        if (rho == s) continue;
        if (!res.count(rho)) res[rho] = L_->restriction_to_face(s, rho, d);
        Vec target = at(rho, d, res[rho] * e, nu);
        int o = b.offset.at(nu);
        for (size_t k = 0; k < target.size(); ++k) {
          Vec row(b.dim());
          for (int c = 0; c < b.dim(); ++c) row[c] = sparse_get(b.basis[c], o + int(k));
          rows.push_back(row);
          rhs.push_back(target[k]);
        }
      }
      Vec x(b.dim());
      if (!rows.empty()) {
        auto sol = solve(Matrix::from_rows(rows, b.dim()), rhs);
        require(sol.has_value(), ErrorKind::DegenerateRestriction, "generator does not lift to the refinement");
        x = *sol;
      }
      SparseVec sec = b.section(x);
      for (int nu : fib) phi_[s][j][nu] = b.stalk(sec, nu);
    }
  }

  SheafPtr L_;
  SubdivisionMap pi_;
  std::shared_ptr<SheafModel> A_;
  std::vector<std::vector<std::map<int, Vec>>> phi_;  // sigma -> generator -> source cone -> value
  mutable std::mutex mu_;
  mutable std::map<std::tuple<int, int, int>, Matrix> subst_;
};

// ----------------------------------------------------------------- pairing

class PoincarePairing {
 public:
  PoincarePairing(SheafPtr L, const SubdivisionMap& refinement)
      : L_(L), emb_(L, refinement), ctx_(make_evaluation_context(refinement.source)) {}

  const EvaluationContext& context() const { return ctx_; }
  const Embedding& embedding() const { return emb_; }

  // The piecewise polynomial on the top cones of the refinement that
  // represents a section (given in some layout over the target fan).
  std::map<int, Vec> realize(const SectionBlock& layout, const SparseVec& s) const {
    std::map<int, Vec> out;
    const SubdivisionMap& pi = emb_.map();
    for (int nu : ctx_.tops) {
      int sigma = pi.assignment[nu];
      require(layout.has(sigma), ErrorKind::InvalidInput, "section does not cover a top cone");
      out[nu] = emb_.at(sigma, layout.degree, layout.stalk(s, sigma), nu);
    }
    return out;
  }

  Rational pair_realized(const std::map<int, Vec>& fa, int da, const std::map<int, Vec>& fb, int db) const {
    int n = ctx_.fan->ambient_dim();
    if (da + db != 2 * n) return 0;
    std::map<int, Vec> f;
    for (int nu : ctx_.tops) f[nu] = poly_mul(n, da / 2, fa.at(nu), db / 2, fb.at(nu));
    return brion_evaluate(ctx_, f, 2 * n);
  }

  Rational pair(const SectionBlock& la, const SparseVec& a, const SectionBlock& lb, const SparseVec& b) const {
    return pair_realized(realize(la, a), la.degree, realize(lb, b), lb.degree);
  }

 private:
  SheafPtr L_;
  Embedding emb_;
  EvaluationContext ctx_;
};

// ---------------------------------------------------- IH of quasi-convex fans

// Intersection cohomology of a pointed quasi-convex fan, relative and
// absolute, with the Poincare pairing between them.
class FanIH {
 public:
  FanIH(FanPtr fan, const SubdivisionMap* refinement = nullptr, RefinementKind kind = RefinementKind::Minimal,
        int cap = -1)
      : fan_(std::move(fan)) {
    require(fan_->pointed(), ErrorKind::NotPointed, "intersection cohomology needs a pointed fan");
    support_ = fan_->classify_support();
    require(support_ != SupportClass::None, ErrorKind::NotQuasiConvex, "fan is not quasi-convex");
    n_ = fan_->ambient_dim();
    L_ = std::make_shared<const SheafModel>(minimal_extension_sheaf(fan_, 0, cap));
    full_ = std::make_shared<const SectionSpace>(*L_, fan_->all_cones(), 2 * n_);
    ih_ = Cohomology(full_, full_->ambient_coordinates());
    std::vector<int> bd = fan_->boundary();
    if (bd.empty()) {
      rel_ = full_;
      ih_rel_ = ih_;
    } else {
      rel_ = std::make_shared<const SectionSpace>(*L_, fan_->all_cones(), 2 * n_, bd);
      ih_rel_ = Cohomology(rel_, rel_->ambient_coordinates());
    }
    SubdivisionMap r = refinement ? *refinement : simplicial_refinement(fan_, kind);
    require(r.target == fan_ || r.target.get() == fan_.get(), ErrorKind::DimensionMismatch,
            "refinement of a different fan");
    pairing_ = std::make_shared<PoincarePairing>(L_, r);
  }

  const FanPtr& fan() const { return fan_; }
  int dim() const { return n_; }
  SupportClass support() const { return support_; }
  bool complete() const { return support_ == SupportClass::Complete; }
  const SheafModel& sheaf() const { return *L_; }
  SheafPtr sheaf_ptr() const { return L_; }
  const Cohomology& ih() const { return ih_; }
  const Cohomology& ih_rel() const { return ih_rel_; }
  const PoincarePairing& pairing() const { return *pairing_; }

  GradedDims dims() const { return ih_.dims(); }
  GradedDims dims_rel() const { return ih_rel_.dims(); }

  // IH^d(Phi, boundary) -> IH^d(Phi)
  Matrix iota(int d) const {
    Matrix m(ih_.dim(d), ih_rel_.dim(d));
    for (int k = 0; k < ih_rel_.dim(d); ++k) m.set_col(k, ih_.classify(d, ih_rel_.representative(d, k)));
    return m;
  }

  std::function<Vec(int)> form_of(const PiecewiseLinear& l) const {
    require(l.fan().get() == fan_.get(), ErrorKind::DimensionMismatch, "function on a different fan");
    const SheafModel* L = L_.get();
    return [L, l](int c) { return L->restrict_form(c, l.form_on(c)); };
  }

  Matrix action(const PiecewiseLinear& l, int d) const { return ih_.action(d, form_of(l)); }
  Matrix action_rel(const PiecewiseLinear& l, int d) const { return ih_rel_.action(d, form_of(l)); }

  // Rows: basis of IH^{2n-d}(Phi, boundary); columns: basis of IH^d(Phi).
  Matrix pairing_matrix(int d) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = pmat_.find(d);
      if (it != pmat_.end()) return it->second;
    }
    int e = 2 * n_ - d;
    Matrix m(ih_rel_.dim(e), ih_.dim(d));
    std::vector<std::map<int, Vec>> ra, rb;
    for (int k = 0; k < ih_rel_.dim(e); ++k) ra.push_back(realized(true, e, k));
    for (int k = 0; k < ih_.dim(d); ++k) rb.push_back(realized(false, d, k));
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) m(i, j) = pairing_->pair_realized(ra[i], e, rb[j], d);
    std::lock_guard<std::mutex> lock(mu_);
    return pmat_.emplace(d, m).first->second;
  }

  // Pairing of a relative class with an absolute class, by coordinates.
  Rational pair_classes(const Vec& rel, int d, const Vec& abs) const {
    Matrix p = pairing_matrix(d);
    Rational s = 0;
    for (int i = 0; i < p.rows(); ++i)
      for (int j = 0; j < p.cols(); ++j)
        if (rel[i] != 0 && abs[j] != 0) s += rel[i] * p(i, j) * abs[j];
    return s;
  }

 private:
  std::map<int, Vec> realized(bool rel, int d, int k) const {
    const Cohomology& c = rel ? ih_rel_ : ih_;
    auto key = std::make_tuple(rel, d, k);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = real_.find(key);
      if (it != real_.end()) return it->second;
    }
    auto r = pairing_->realize(c.sections().block(d), c.representative(d, k));
    std::lock_guard<std::mutex> lock(mu_);
    return real_.emplace(key, r).first->second;
  }

  FanPtr fan_;
  int n_ = 0;
  SupportClass support_ = SupportClass::None;
  SheafPtr L_;
  std::shared_ptr<const SectionSpace> full_, rel_;
  Cohomology ih_, ih_rel_;
  std::shared_ptr<PoincarePairing> pairing_;
  mutable std::mutex mu_;
  mutable std::map<int, Matrix> pmat_;
  mutable std::map<std::tuple<bool, int, int>, std::map<int, Vec>> real_;
};

// ------------------------------------------------------------------ W forms

// The image W of IH(Phi, boundary) in IH(Phi), with the induced symmetric form
// B(w1, w2) = <h2, w1> for any h2 with iota(h2) = w2.
struct WSpace {
  int center = 0;
  GradedDims dims;
  std::map<int, Matrix> basis;  // columns in IH^d coordinates
  std::map<int, Matrix> lift;   // columns in IH^d(Phi, boundary) coordinates, iota(lift) = basis
  std::map<int, Matrix> form;   // d -> rows W^{2c-d}, columns W^d
};

inline WSpace boundary_image(const FanIH& F) {
  WSpace W;
  int n = F.dim();
  W.center = n;
  for (int d = 0; d <= 2 * n; d += 2) {
    Matrix io = F.iota(d);
    Matrix b = column_space(io);
    if (b.cols() == 0) continue;
    W.dims[d] = b.cols();
    W.basis[d] = b;
    auto x = solve(io, b);
    require(x.has_value(), ErrorKind::DegenerateRestriction, "image basis has no preimage");
    W.lift[d] = *x;
  }
  for (auto& [d, b] : W.basis) {
    int e = 2 * n - d;
    if (!W.basis.count(e)) continue;
    Matrix p = F.pairing_matrix(d);  // IH_rel^e x IH^d
    W.form[d] = W.lift[e].transpose() * p * b;
  }
  return W;
}

// Restriction of an operator on IH to an invariant subspace given by basis
// columns.
inline Matrix restrict_operator(const Matrix& op, const Matrix& from, const Matrix& to) {
  if (from.cols() == 0) return Matrix(to.cols(), 0);
  Matrix img = op * from;
  if (to.cols() == 0) {
    require(img.is_zero(), ErrorKind::KernelNotPreserved, "operator leaves the subspace");
    return Matrix(0, from.cols());
  }
  auto x = solve(to, img);
  require(x.has_value(), ErrorKind::KernelNotPreserved, "operator leaves the subspace");
  return *x;
}

// ------------------------------------------------------------------ chi_tau

// chi_tau: product of the dual forms of the rays of a simplicial cone tau,
// extended over star(tau) using a local product structure and by zero
// elsewhere.  Given per cone of the closed star, in the cone's coordinates,
// as a polynomial of degree dim tau.
struct ChiFunction {
  int tau = 0;
  int degree = 0;               // even
  std::map<int, Vec> pieces;    // cone of [star tau] -> polynomial
};

inline ChiFunction chi_generator(FanPtr fan, int tau) {
  const Fan& f = *fan;
  require(f.simplicial(tau), ErrorKind::SourceNotSimplicial, "chi needs a simplicial cone");
  auto lp = detect_local_product(f, tau);
  require(lp.has_value(), ErrorKind::NoLocalProduct, "no local product structure at the cone");
  const Cone& t = f.cone(tau);
  int k = int(t.rays.size());
  ChiFunction chi;
  chi.tau = tau;
  chi.degree = 2 * k;
  std::vector<int> closed = f.closure(f.star(tau));
  for (int c : closed) {
    int top = -1;
    for (int s : f.star(tau))
      if (f.is_face(c, s) && (top < 0 || f.cone(s).dim > f.cone(top).dim)) top = s;
    // dual forms on Span(top): u_i(ray_j of tau) = delta, u_i = 0 on Span(top')
    const Cone& sc = f.cone(top);
    int nv = sc.dim;
    std::vector<Vec> rows;
    for (int r : t.rays) rows.push_back(f.span_coordinates(top, f.ray(r)));
    const Cone& comp = f.cone(lp->at(top));
    for (int i = 0; i < comp.span_basis.rows(); ++i) rows.push_back(f.span_coordinates(top, comp.span_basis.row(i)));
    Matrix M = Matrix::from_rows(rows, nv);  // u (as column vectors in coordinates) solves M u = e_i
    Vec poly{1};
    int deg = 0;
    Matrix sub(nv, f.cone(c).dim);
    for (int i = 0; i < f.cone(c).span_basis.rows(); ++i) {
      Vec y = f.span_coordinates(top, f.cone(c).span_basis.row(i));
      for (int j = 0; j < nv; ++j) sub(j, i) = y[j];
    }
    for (int i = 0; i < k; ++i) {
      Vec rhs(rows.size());
      rhs[i] = 1;
      auto u = solve(M, rhs);
      require(u.has_value(), ErrorKind::NoLocalProduct, "dual form does not exist");
      // restrict the form to Span c: coefficient on c's basis vector b is u . coords(b)
      Vec uc(f.cone(c).dim);
      for (int a = 0; a < uc.size(); ++a)
        for (int j = 0; j < nv; ++j) uc[a] += (*u)[j] * sub(j, a);
      poly = poly_mul(f.cone(c).dim, deg, poly, 1, uc);
      ++deg;
    }
    chi.pieces[c] = poly;
  }
  return chi;
}

}  // namespace fanih
