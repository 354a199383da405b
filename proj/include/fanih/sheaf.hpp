#pragma once

// Sheaves on fans whose stalks are free graded modules over the polynomial
// ring of the cone's span.  A stalk is described by its generator degrees;
// restriction to a facet is described by the images of the generators,
// extended module-linearly.  Polynomials on Span(sigma) are written in the
// coordinates of the cone's span basis.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <tuple>
#include <vector>

#include "fanih/graded.hpp"
#include "fanih/piecewise.hpp"
#include "fanih/poly.hpp"
#include "fanih/subdivision.hpp"

namespace fanih {

class SheafModel {
 public:
  SheafModel(FanPtr fan, int cap)
      : fan_(std::move(fan)), cap_(cap), gens_(fan_->num_cones()), images_(fan_->num_cones()) {}
  SheafModel(const SheafModel& o)
      : fan_(o.fan_), cap_(o.cap_), gens_(o.gens_), images_(o.images_) {}

  const FanPtr& fan() const { return fan_; }
  int cap() const { return cap_; }

  // polynomial variables on the stalk of cone c
  int nvars(int c) const { return fan_->cone(c).dim; }
  const std::vector<int>& generators(int c) const { return gens_[c]; }
  bool zero_stalk(int c) const { return gens_[c].empty(); }

  GradedDims generator_dims(int c) const {
    GradedDims g;
    for (int d : gens_[c]) g[d]++;
    return g;
  }

  int stalk_dim(int c, int d) const {
    int s = 0;
    for (int g : gens_[c])
      if (g <= d) s += num_monomials(nvars(c), (d - g) / 2);
    return s;
  }
  // offset of generator j's block in degree d (its monomials follow)
  int generator_offset(int c, int j, int d) const {
    int s = 0;
    for (int k = 0; k < j; ++k)
      if (gens_[c][k] <= d) s += num_monomials(nvars(c), (d - gens_[c][k]) / 2);
    return s;
  }

  // construction ------------------------------------------------------
  void set_generators(int c, std::vector<int> degs) {
    for (int d : degs) check_even(d);
    gens_[c] = std::move(degs);
    std::lock_guard<std::mutex> lock(mu_);
    res_cache_.clear();
  }
  // images[j]: image of generator j of sigma in tau's free coordinates,
  // degree gens(sigma)[j]
  void set_restriction(int sigma, int tau, std::vector<Vec> images) {
    images_[sigma][tau] = std::move(images);
    std::lock_guard<std::mutex> lock(mu_);
    res_cache_.clear();
  }
  const std::vector<Vec>& restriction_images(int sigma, int tau) const {
    static const std::vector<Vec> none;
    auto it = images_[sigma].find(tau);
    return it == images_[sigma].end() ? none : it->second;
  }

  // substitution of sigma's span coordinates into tau's (tau a face)
  Matrix coordinate_forms(int sigma, int tau) const {
    const Cone& t = fan_->cone(tau);
    Matrix f(nvars(sigma), nvars(tau));
    for (int i = 0; i < t.span_basis.rows(); ++i) {
      Vec c = fan_->span_coordinates(sigma, t.span_basis.row(i));
      for (int j = 0; j < nvars(sigma); ++j) f(j, i) = c[j];
    }
    return f;
  }

  // ambient linear form restricted to Span c, in c's coordinates
  Vec restrict_form(int c, const Vec& u) const {
    const Matrix& b = fan_->cone(c).span_basis;
    Vec v(b.rows());
    for (int i = 0; i < b.rows(); ++i) v[i] = dot(u, b.row(i));
    return v;
  }

  // Restriction F_sigma^d -> F_tau^d for a facet tau of sigma.
  const Matrix& restriction(int sigma, int tau, int d) const {
    auto key = std::make_tuple(sigma, tau, d);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = res_cache_.find(key);
      if (it != res_cache_.end()) return it->second;
    }
    Matrix m(stalk_dim(tau, d), stalk_dim(sigma, d));
    const auto& imgs = restriction_images(sigma, tau);
    if (!imgs.empty() && m.rows() > 0) {
      Matrix forms = coordinate_forms(sigma, tau);
      int nt = nvars(tau);
      for (size_t j = 0; j < gens_[sigma].size(); ++j) {
        int dj = gens_[sigma][j];
        if (dj > d) continue;
        int e = (d - dj) / 2;
        Matrix sub = linear_substitution(forms, e);
        int col0 = generator_offset(sigma, int(j), d);
        for (size_t i = 0; i < gens_[tau].size(); ++i) {
          int di = gens_[tau][i];
          if (di > dj) continue;
          // component of the image on generator i: poly of degree (dj-di)/2
          int off = generator_offset(tau, int(i), dj);
          int len = num_monomials(nt, (dj - di) / 2);
          Vec c(imgs[j].begin() + off, imgs[j].begin() + off + len);
          if (is_zero(c)) continue;
          Matrix blk = multiply_by_poly(nt, e, (dj - di) / 2, c) * sub;
          int row0 = generator_offset(tau, int(i), d);
          for (int r = 0; r < blk.rows(); ++r)
            for (int k = 0; k < blk.cols(); ++k)
              if (blk(r, k) != 0) m(row0 + r, col0 + k) += blk(r, k);
        }
      }
    }
    std::lock_guard<std::mutex> lock(mu_);
    return res_cache_.emplace(key, std::move(m)).first->second;
  }

  // Restriction to an arbitrary face, composed along a chain of facets.
  Matrix restriction_to_face(int sigma, int tau, int d) const {
    if (sigma == tau) return Matrix::identity(stalk_dim(sigma, d));
    for (int f : fan_->cone(sigma).facets)
      if (fan_->is_face(tau, f)) return restriction_to_face(f, tau, d) * restriction(sigma, f, d);
    fail(ErrorKind::NotAFace, "restriction to a non-face");
  }

  // Multiplication by a linear form (in c's span coordinates), degree d -> d+2.
  Matrix multiplication(int c, const Vec& form, int d) const {
    Matrix m(stalk_dim(c, d + 2), stalk_dim(c, d));
    int v = nvars(c);
    for (size_t j = 0; j < gens_[c].size(); ++j) {
      int g = gens_[c][j];
      if (g > d) continue;
      Matrix blk = multiply_by_linear(v, form, (d - g) / 2);
      int r0 = generator_offset(c, int(j), d + 2), c0 = generator_offset(c, int(j), d);
      for (int r = 0; r < blk.rows(); ++r)
        for (int k = 0; k < blk.cols(); ++k)
          if (blk(r, k) != 0) m(r0 + r, c0 + k) = blk(r, k);
    }
    return m;
  }

  // Multiplication by a polynomial of (polynomial) degree e in c's coordinates.
  Matrix multiplication_poly(int c, int e, const Vec& p, int d) const {
    Matrix m(stalk_dim(c, d + 2 * e), stalk_dim(c, d));
    int v = nvars(c);
    for (size_t j = 0; j < gens_[c].size(); ++j) {
      int g = gens_[c][j];
      if (g > d) continue;
      Matrix blk = multiply_by_poly(v, (d - g) / 2, e, p);
      int r0 = generator_offset(c, int(j), d + 2 * e), c0 = generator_offset(c, int(j), d);
      for (int r = 0; r < blk.rows(); ++r)
        for (int k = 0; k < blk.cols(); ++k)
          if (blk(r, k) != 0) m(r0 + r, c0 + k) = blk(r, k);
    }
    return m;
  }

  // Entries of F_c^d that survive modulo the maximal ideal: the constant
  // coefficient of every generator of degree exactly d.
  std::vector<int> constant_positions(int c, int d) const {
    std::vector<int> pos;
    for (size_t j = 0; j < gens_[c].size(); ++j)
      if (gens_[c][j] == d) pos.push_back(generator_offset(c, int(j), d));
    return pos;
  }

 private:
  FanPtr fan_;
  int cap_;
  std::vector<std::vector<int>> gens_;
  std::vector<std::map<int, std::vector<Vec>>> images_;
  mutable std::mutex mu_;
  mutable std::map<std::tuple<int, int, int>, Matrix> res_cache_;
};

using SheafPtr = std::shared_ptr<const SheafModel>;

inline int default_cap(const Fan& f) { return 2 * f.dim() + 2; }

// The constant sheaf of polynomial functions.
inline SheafModel structure_sheaf(FanPtr fan, int cap = -1) {
  if (cap < 0) cap = default_cap(*fan);
  SheafModel a(fan, cap);
  for (int c = 0; c < fan->num_cones(); ++c) a.set_generators(c, {0});
  for (int c = 0; c < fan->num_cones(); ++c)
    for (int t : fan->cone(c).facets) a.set_restriction(c, t, {Vec{1}});
  return a;
}

// ------------------------------------------------------------------ sections

// Sections of a sheaf over a subfan in one degree.  Coordinates of the
// ambient vector are the stalk coordinates of the cones in `cones`, in that
// order.  basis[k] has a 1 in position coord_cols[k] and 0 in the other
// coordinate positions, so the coordinates of any section are its entries at
// coord_cols.
struct SectionBlock {
  int degree = 0;
  std::vector<int> cones;
  std::map<int, int> offset;
  std::map<int, int> size;
  int total = 0;
  std::vector<int> coord_cols;
  std::vector<SparseVec> basis;

  int dim() const { return int(basis.size()); }

  Vec coordinates(const SparseVec& s) const {
    Vec v(coord_cols.size());
    size_t k = 0;
    for (const auto& [j, x] : s) {
      while (k < coord_cols.size() && coord_cols[k] < j) ++k;
      if (k < coord_cols.size() && coord_cols[k] == j) v[k] = x;
    }
    return v;
  }

  SparseVec section(const Vec& coords) const {
    std::map<int, Rational> acc;
    for (size_t k = 0; k < coords.size(); ++k) {
      if (coords[k] == 0) continue;
      for (const auto& [j, x] : basis[k]) acc[j] += coords[k] * x;
    }
    SparseVec s;
    for (auto& [j, x] : acc)
      if (x != 0) s.emplace_back(j, x);
    return s;
  }

  Vec stalk(const SparseVec& s, int cone) const {
    int o = offset.at(cone), n = size.at(cone);
    Vec v(n);
    for (const auto& [j, x] : s)
      if (j >= o && j < o + n) v[j - o] = x;
    return v;
  }

  bool has(int cone) const { return offset.count(cone) > 0; }
};

inline SectionBlock section_layout(const SheafModel& F, std::vector<int> cones, int d) {
  std::sort(cones.begin(), cones.end());
  SectionBlock b;
  b.degree = d;
  b.cones = cones;
  for (int c : cones) {
    b.offset[c] = b.total;
    b.size[c] = F.stalk_dim(c, d);
    b.total += b.size[c];
  }
  return b;
}

// Move a section vector between layouts (target cones must be a subset).
inline SparseVec transfer(const SparseVec& s, const SectionBlock& from, const SectionBlock& to) {
  SparseVec out;
  for (int c : to.cones) {
    int o = from.offset.at(c), n = from.size.at(c), t = to.offset.at(c);
    for (const auto& [j, x] : s)
      if (j >= o && j < o + n) out.emplace_back(j - o + t, x);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

inline SparseVec from_stalks(const SectionBlock& layout, const std::map<int, Vec>& stalks) {
  SparseVec s;
  for (int c : layout.cones) {
    auto it = stalks.find(c);
    if (it == stalks.end()) continue;
    int o = layout.offset.at(c);
    for (size_t k = 0; k < it->second.size(); ++k)
      if (it->second[k] != 0) s.emplace_back(o + int(k), it->second[k]);
  }
  return s;
}

// Sections over the subfan `cones` in degree d, vanishing on `vanish`.
inline SectionBlock compute_sections(const SheafModel& F, const std::vector<int>& cones, int d,
                                     const std::vector<int>& vanish = {}) {
  check_even(d);
  SectionBlock b = section_layout(F, cones, d);
  const Fan& fan = *F.fan();
  std::set<int> in(b.cones.begin(), b.cones.end());
  std::set<int> zero(vanish.begin(), vanish.end());
  SparseEliminator el(b.total);
  for (int c : b.cones) {
    if (zero.count(c)) {
      for (int k = 0; k < b.size[c]; ++k) el.add_row({{b.offset[c] + k, Rational(1)}});
    }
  }
  for (int s : b.cones) {
    if (b.size[s] == 0) continue;
    for (int t : fan.cone(s).facets) {
      if (!in.count(t)) continue;
      if (zero.count(s)) continue;
      const Matrix& r = F.restriction(s, t, d);
      int os = b.offset[s], ot = b.offset[t];
      for (int i = 0; i < r.rows(); ++i) {
        SparseVec row;
        if (!zero.count(t)) row.emplace_back(ot + i, Rational(-1));
        for (int k = 0; k < r.cols(); ++k)
          if (r(i, k) != 0) row.emplace_back(os + k, r(i, k));
        std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        if (!row.empty()) el.add_row(row);
      }
    }
  }
  auto k = el.kernel();
  b.coord_cols = std::move(k.free_cols);
  b.basis = std::move(k.basis);
  return b;
}

// Per-cone multiplication matrices for the forms, degree a.degree -> +2.
inline std::map<int, Matrix> multiplication_blocks(const SheafModel& F, const SectionBlock& a,
                                                   const std::function<Vec(int)>& form) {
  std::map<int, Matrix> m;
  for (int c : a.cones)
    if (a.size.at(c) > 0) m.emplace(c, F.multiplication(c, form(c), a.degree));
  return m;
}

inline SparseVec multiply_section(const SparseVec& s, const SectionBlock& a, const SectionBlock& b,
                                  const std::map<int, Matrix>& blocks) {
  std::map<int, Rational> acc;
  for (const auto& [c, M] : blocks) {
    Vec v = a.stalk(s, c);
    if (is_zero(v)) continue;
    Vec w = M * v;
    int o = b.offset.at(c);
    for (size_t k = 0; k < w.size(); ++k)
      if (w[k] != 0) acc[o + int(k)] += w[k];
  }
  SparseVec out;
  for (auto& [j, x] : acc)
    if (x != 0) out.emplace_back(j, x);
  return out;
}

// Multiply a section by per-cone linear forms (given in each cone's span
// coordinates); from layout `a` (degree d) to layout `b` (degree d+2).
inline SparseVec multiply_section(const SheafModel& F, const SparseVec& s, const SectionBlock& a,
                                  const SectionBlock& b, const std::function<Vec(int)>& form) {
  return multiply_section(s, a, b, multiplication_blocks(F, a, form));
}

class SectionSpace {
 public:
  SectionSpace() = default;
  SectionSpace(const SheafModel& F, std::vector<int> cones, int max_degree, std::vector<int> vanish = {})
      : F_(&F), cones_(std::move(cones)), vanish_(std::move(vanish)), max_degree_(max_degree) {
    for (int d = 0; d <= max_degree; d += 2) blocks_[d] = compute_sections(F, cones_, d, vanish_);
  }

  const SheafModel& sheaf() const { return *F_; }
  const std::vector<int>& cones() const { return cones_; }
  int max_degree() const { return max_degree_; }
  const SectionBlock& block(int d) const { return blocks_.at(d); }
  bool has_degree(int d) const { return blocks_.count(d) > 0; }

  GradedDims dims() const {
    GradedDims g;
    for (const auto& [d, b] : blocks_) g[d] = b.dim();
    return prune(g);
  }

  // Section coordinates (degree d+2) of the product of basis section k of
  // degree d with per-cone linear forms.
  Vec multiply_coords(int d, const SparseVec& s, const std::function<Vec(int)>& form) const {
    const SectionBlock& a = blocks_.at(d);
    const SectionBlock& b = blocks_.at(d + 2);
    return b.coordinates(multiply_section(*F_, s, a, b, form));
  }

  // Matrix of multiplication by the ambient linear form u, degree d -> d+2.
  Matrix multiplication_matrix(int d, const std::function<Vec(int)>& form) const {
    const SectionBlock& a = blocks_.at(d);
    const SectionBlock& b = blocks_.at(d + 2);
    Matrix m(b.dim(), a.dim());
    auto blocks = multiplication_blocks(*F_, a, form);
    for (int k = 0; k < a.dim(); ++k) m.set_col(k, b.coordinates(multiply_section(a.basis[k], a, b, blocks)));
    return m;
  }

  // The module over the polynomial ring generated by the given per-cone forms.
  DegreewiseModule module(const std::vector<std::function<Vec(int)>>& forms) const {
    DegreewiseModule m;
    m.cap = max_degree_;
    m.nvars = int(forms.size());
    m.dims = dims();
    m.ops.resize(forms.size());
    for (size_t i = 0; i < forms.size(); ++i)
      for (int d = 0; d + 2 <= max_degree_; d += 2) m.ops[i][d] = multiplication_matrix(d, forms[i]);
    return m;
  }

  // Forms for the ambient coordinate functions x_1..x_n.
  std::vector<std::function<Vec(int)>> ambient_coordinates() const {
    std::vector<std::function<Vec(int)>> fs;
    const SheafModel* F = F_;
    for (int i = 0; i < F->fan()->ambient_dim(); ++i)
      fs.push_back([F, i](int c) {
        Vec u(F->fan()->ambient_dim());
        u[i] = 1;
        return F->restrict_form(c, u);
      });
    return fs;
  }

 private:
  const SheafModel* F_ = nullptr;
  std::vector<int> cones_;
  std::vector<int> vanish_;
  int max_degree_ = 0;
  std::map<int, SectionBlock> blocks_;
};

// Sections modulo the ideal generated by the given linear forms.
class Cohomology {
 public:
  Cohomology() = default;
  Cohomology(std::shared_ptr<const SectionSpace> S, std::vector<std::function<Vec(int)>> ideal)
      : S_(std::move(S)), ideal_(std::move(ideal)) {
    for (int d = 0; d <= S_->max_degree(); d += 2) {
      const SectionBlock& b = S_->block(d);
      Matrix gens(b.dim(), 0);
      if (d >= 2) {
        const SectionBlock& a = S_->block(d - 2);
        std::vector<Vec> cols;
        for (const auto& f : ideal_) {
          auto blocks = multiplication_blocks(S_->sheaf(), a, f);
          for (int k = 0; k < a.dim(); ++k) cols.push_back(b.coordinates(multiply_section(a.basis[k], a, b, blocks)));
        }
        gens = Matrix::from_columns(cols, b.dim());
      }
      quot_[d] = quotient_basis(gens, b.dim());
    }
  }

  const SectionSpace& sections() const { return *S_; }
  std::shared_ptr<const SectionSpace> sections_ptr() const { return S_; }
  int max_degree() const { return S_->max_degree(); }

  GradedDims dims() const {
    GradedDims g;
    for (const auto& [d, q] : quot_) g[d] = int(q.complement.size());
    return prune(g);
  }
  int dim(int d) const {
    auto it = quot_.find(d);
    return it == quot_.end() ? 0 : int(it->second.complement.size());
  }

  // Section representing basis class k of degree d.
  const SparseVec& representative(int d, int k) const { return S_->block(d).basis[quot_.at(d).complement[k]]; }

  // Class of a section (given by its section coordinates).
  Vec classify_coords(int d, const Vec& coords) const { return quot_.at(d).reduce(coords); }
  Vec classify(int d, const SparseVec& s) const { return classify_coords(d, S_->block(d).coordinates(s)); }

  // Action of multiplication by per-cone forms, IH^d -> IH^{d+2}.
  Matrix action(int d, const std::function<Vec(int)>& form) const {
    Matrix m(dim(d + 2), dim(d));
    if (d + 2 > max_degree()) return m;
    for (int k = 0; k < dim(d); ++k)
      m.set_col(k, classify_coords(d + 2, S_->multiply_coords(d, representative(d, k), form)));
    return m;
  }

 private:
  std::shared_ptr<const SectionSpace> S_;
  std::vector<std::function<Vec(int)>> ideal_;
  std::map<int, QuotientBasis> quot_;
};

// ---------------------------------------------------------- minimal extension

// The minimal extension sheaf L^tau (tau = origin gives the sheaf whose
// global sections mod m compute intersection cohomology).
inline SheafModel minimal_extension_sheaf(FanPtr fan, int tau = 0, int cap = -1) {
  if (cap < 0) cap = default_cap(*fan);
  SheafModel L(fan, cap);
  L.set_generators(tau, {0});
  int dt = fan->cone(tau).dim;
  for (int s : fan->star(tau)) {
    if (s == tau) continue;
    int bound = fan->cone(s).dim - dt;  // generators live strictly below this degree
    int dmax = bound - 1;
    if (dmax % 2) --dmax;
    require(dmax <= cap, ErrorKind::CapTooLow, "degree cap below the generator bound");
    int check = (bound % 2 == 0) ? bound : bound + 1;  // first degree that must carry no generator
    int top = std::min(check, std::max(cap, dmax));
    std::vector<int> bd = fan->boundary_of(s);
    SectionSpace S(L, bd, top);
    std::vector<std::function<Vec(int)>> ys;
    for (int j = 0; j < fan->cone(s).dim; ++j)
      ys.push_back([&L, s, j](int c) {
        Matrix f = L.coordinate_forms(s, c);
        return f.row(j);
      });
    std::vector<int> degs;
    std::vector<SparseVec> lifts;
    std::vector<int> lift_deg;
    for (int d = 0; d <= top; d += 2) {
      const SectionBlock& b = S.block(d);
      Matrix dec(b.dim(), 0);
      if (d >= 2) {
        const SectionBlock& a = S.block(d - 2);
        std::vector<Vec> cols;
        for (const auto& y : ys) {
          auto blocks = multiplication_blocks(L, a, y);
          for (int k = 0; k < a.dim(); ++k) cols.push_back(b.coordinates(multiply_section(a.basis[k], a, b, blocks)));
        }
        dec = Matrix::from_columns(cols, b.dim());
      }
      QuotientBasis q = quotient_basis(dec, b.dim());
      if (d > dmax) {
        require(q.complement.empty(), ErrorKind::GeneratorDegreeBound, "generator above the degree bound");
        continue;
      }
      for (int k : q.complement) {
        degs.push_back(d);
        lifts.push_back(b.basis[k]);
        lift_deg.push_back(d);
      }
    }
    L.set_generators(s, degs);
    for (int t : fan->cone(s).facets) {
      std::vector<Vec> imgs;
      for (size_t j = 0; j < lifts.size(); ++j) imgs.push_back(S.block(lift_deg[j]).stalk(lifts[j], t));
      L.set_restriction(s, t, imgs);
    }
  }
  return L;
}

// Surjectivity of F_sigma^d -> F(boundary sigma)^d for all cones and d <= max_degree.
inline bool verify_flabby(const SheafModel& F, int max_degree) {
  const Fan& fan = *F.fan();
  for (int s = 0; s < fan.num_cones(); ++s) {
    std::vector<int> closed = fan.cone(s).faces;
    std::vector<int> bd = fan.boundary_of(s);
    for (int d = 0; d <= max_degree; d += 2) {
      SectionBlock whole = compute_sections(F, closed, d);
      SectionBlock part = compute_sections(F, bd, d);
      if (whole.dim() != F.stalk_dim(s, d)) return false;
      SectionBlock lay = section_layout(F, bd, d);
      std::vector<Vec> cols;
      for (const auto& v : whole.basis) cols.push_back(part.coordinates(transfer(v, whole, lay)));
      int r = cols.empty() ? 0 : rank(Matrix::from_columns(cols, part.dim()));
      if (r != part.dim()) return false;
    }
  }
  return true;
}

// ------------------------------------------------------------ pushforward

// pi_* G for a subdivision pi, as a sheaf with free stalks on the target,
// together with the identification of each stalk with sections of G over the
// fibre.
struct Pushforward {
  SubdivisionMap pi;
  SheafPtr G;
  std::shared_ptr<SheafModel> F;
  std::map<int, std::shared_ptr<const SectionSpace>> fiber;   // sigma -> sections of G over the fibre
  std::map<int, std::map<int, Matrix>> realize;                // sigma, d -> section coords x free coords

  // Inverse of realize(sigma, d), computed on first use; the big stalks are
  // rarely inverted at every degree.
  const Matrix& realize_inv(int sigma, int d) const {
    std::lock_guard<std::mutex> lock(inv_->mu);
    auto key = std::make_pair(sigma, d);
    auto it = inv_->m.find(key);
    if (it != inv_->m.end()) return it->second;
    const Matrix& m = realize.at(sigma).at(d);
    return inv_->m.emplace(key, m.rows() ? inverse(m) : m).first->second;
  }

  // Section of G over the fibre of sigma representing a free element.
  SparseVec to_section(int sigma, int d, const Vec& free) const {
    const SectionBlock& b = fiber.at(sigma)->block(d);
    return b.section(realize.at(sigma).at(d) * free);
  }
  Vec to_free(int sigma, int d, const SparseVec& s) const {
    return realize_inv(sigma, d) * fiber.at(sigma)->block(d).coordinates(s);
  }

 private:
  struct InverseCache {
    std::mutex mu;
    std::map<std::pair<int, int>, Matrix> m;
  };
  std::shared_ptr<InverseCache> inv_ = std::make_shared<InverseCache>();
};

inline Pushforward pushforward(const SubdivisionMap& pi, SheafPtr G, int cap = -1) {
  const Fan& tgt = *pi.target;
  if (cap < 0) cap = default_cap(tgt);
  Pushforward P;
  P.pi = pi;
  P.G = G;
  P.F = std::make_shared<SheafModel>(pi.target, cap);
  for (int s = 0; s < tgt.num_cones(); ++s) {
    int nv = tgt.cone(s).dim;
    auto S = std::make_shared<const SectionSpace>(*G, pi.fiber(s), cap);
    P.fiber[s] = S;
    // A_sigma acts through sigma's span coordinates
    auto coords = std::make_shared<std::map<int, Matrix>>();  // source cone -> nv x dim c
    for (int c : pi.fiber(s)) {
      const Cone& cc = pi.source->cone(c);
      Matrix m(nv, cc.dim);
      for (int i = 0; i < cc.span_basis.rows(); ++i) m.set_col(i, tgt.span_coordinates(s, cc.span_basis.row(i)));
      coords->emplace(c, m);
    }
    std::vector<std::function<Vec(int)>> ys;
    for (int j = 0; j < nv; ++j) ys.push_back([coords, j](int c) { return coords->at(c).row(j); });
    std::map<int, std::vector<Matrix>> ops;  // d -> per variable, coords(d) -> coords(d+2)
    for (int d = 0; d + 2 <= cap; d += 2)
      for (const auto& y : ys) ops[d].push_back(S->multiplication_matrix(d, y));
    std::vector<int> degs;
    std::vector<int> gen_coord;  // coordinate index (within its degree) of each generator
    std::map<int, Matrix> phi;   // d -> section coords x free coords
    for (int d = 0; d <= cap; d += 2) {
      const SectionBlock& b = S->block(d);
      // columns: for each existing generator j (in order) and monomial of degree (d-dj)/2
      std::vector<Vec> cols;
      for (size_t j = 0; j < degs.size(); ++j) {
        int dj = degs[j];
        int e = (d - dj) / 2;
        const auto& mons = monomials(nv, e);
        for (const auto& mon : mons) {
          if (e == 0) {
            Vec v(b.dim());
            v[gen_coord[j]] = 1;
            cols.push_back(v);
            continue;
          }
          Exponent prev = mon;
          int var = 0;
          while (prev[var] == 0) ++var;
          prev[var]--;
          // locate the column of prev * g_j in degree d-2
          int off = 0;
          for (size_t k = 0; k < j; ++k)
            if (degs[k] <= d - 2) off += num_monomials(nv, (d - 2 - degs[k]) / 2);
          int idx = off + monomial_index(nv, prev);
          cols.push_back(ops[d - 2][var] * phi[d - 2].col(idx));
        }
      }
      // new generators: complement of the decomposable part
      Matrix dec = cols.empty() ? Matrix(b.dim(), 0) : Matrix::from_columns(cols, b.dim());
      QuotientBasis q = quotient_basis(dec, b.dim());
      for (int k : q.complement) {
        degs.push_back(d);
        gen_coord.push_back(k);
        Vec v(b.dim());
        v[k] = 1;
        cols.push_back(v);
      }
      // free iff the decomposable columns are independent; the complement
      // then fills the block exactly
      int indep = dec.cols() == 0 ? 0 : int(q.image.pivots.size());
      Matrix m = cols.empty() ? Matrix(b.dim(), 0) : Matrix::from_columns(cols, b.dim());
      require(indep == dec.cols() && m.rows() == m.cols(), ErrorKind::FreenessCheckFailed,
              "pushforward stalk is not free on its minimal generators");
      phi[d] = m;
    }
    P.F->set_generators(s, degs);
    for (auto& [d, m] : phi) P.realize[s][d] = m;
    for (int t : tgt.cone(s).facets) {
      const SectionSpace& St = *P.fiber.at(t);
      std::vector<Vec> imgs;
      for (size_t j = 0; j < degs.size(); ++j) {
        const SectionBlock& bs = S->block(degs[j]);
        const SectionBlock& bt = St.block(degs[j]);
        SparseVec sec = bs.basis[gen_coord[j]];
        SparseVec r = transfer(sec, bs, bt);
        imgs.push_back(P.realize_inv(t, degs[j]) * bt.coordinates(r));
      }
      P.F->set_restriction(s, t, imgs);
    }
  }
  return P;
}

// ------------------------------------------------------------- decompose

// Multiplicity spaces of a sheaf: for each cone, the kernel of
// F_sigma / m -> F(boundary sigma) / m, as subspaces of the generator space.
struct MultiplicityTable {
  int offset = 0;                                   // perverse degree p = d - (dim sigma - offset)
  std::map<int, GradedDims> dims;                   // cone -> degree -> dim
  std::map<int, std::map<int, Matrix>> basis;       // cone -> degree -> columns in generator coordinates
  std::map<int, std::map<int, std::vector<int>>> gens;  // cone -> degree -> generator indices

  GradedDims at(int c) const {
    auto it = dims.find(c);
    return it == dims.end() ? GradedDims{} : it->second;
  }
};

inline MultiplicityTable decompose(const SheafModel& F, int offset = 0) {
  const Fan& fan = *F.fan();
  MultiplicityTable T;
  T.offset = offset;
  for (int s = 0; s < fan.num_cones(); ++s) {
    const auto& g = F.generators(s);
    if (g.empty()) continue;
    std::map<int, std::vector<int>> by_deg;
    for (size_t j = 0; j < g.size(); ++j) by_deg[g[j]].push_back(int(j));
    std::vector<int> closed = fan.cone(s).faces;
    std::vector<int> bd = fan.boundary_of(s);
    int nv = fan.cone(s).dim;
    std::vector<std::function<Vec(int)>> ys;
    for (int j = 0; j < nv; ++j)
      ys.push_back([&F, s, j](int c) { return F.coordinate_forms(s, c).row(j); });
    for (const auto& [d, idx] : by_deg) {
      int gd = int(idx.size());
      Matrix W;
      if (bd.empty()) {
        W = Matrix::identity(gd);
      } else {
        SectionBlock whole = compute_sections(F, closed, d);
        SectionBlock part = compute_sections(F, bd, d);
        SectionBlock lay = section_layout(F, bd, d);
        // generator j is the section whose coordinate at sigma's constant entry is 1
        std::vector<Vec> cols;
        for (int j : idx) {
          int pos = whole.offset.at(s) + F.generator_offset(s, j, d);
          size_t k = std::find(whole.coord_cols.begin(), whole.coord_cols.end(), pos) - whole.coord_cols.begin();
          require(k < whole.coord_cols.size(), ErrorKind::DegenerateRestriction, "stalk coordinate is not free");
          cols.push_back(part.coordinates(transfer(whole.basis[k], whole, lay)));
        }
        if (d >= 2) {
          SectionBlock prev = compute_sections(F, bd, d - 2);
          for (const auto& y : ys) {
            auto blocks = multiplication_blocks(F, prev, y);
            for (int k = 0; k < prev.dim(); ++k)
              cols.push_back(part.coordinates(multiply_section(prev.basis[k], prev, part, blocks)));
          }
        }
        Matrix M = Matrix::from_columns(cols, part.dim());
        Matrix K = kernel(M);
        Matrix proj = K.block(0, 0, gd, K.cols());
        W = column_space(proj);
      }
      if (W.cols() == 0) continue;
      T.dims[s][d] = W.cols();
      T.basis[s][d] = W;
      T.gens[s][d] = idx;
    }
  }
  return T;
}

// Perverse degree of multiplicity spaces: p -> total dimension.
inline std::map<int, int> perverse_table(const MultiplicityTable& T, const Fan& fan) {
  std::map<int, int> p;
  for (const auto& [c, g] : T.dims)
    for (auto [d, n] : g) p[d - (fan.cone(c).dim - T.offset)] += n;
  return p;
}

// Cumulative dimensions of the truncations tau_{<= p}.
inline std::map<int, int> truncation_dims(const MultiplicityTable& T, const Fan& fan) {
  auto p = perverse_table(T, fan);
  std::map<int, int> out;
  int run = 0;
  for (auto [k, n] : p) {
    run += n;
    out[k] = run;
  }
  return out;
}

// Check that generator degrees of every stalk equal
// sum_tau W_tau (x) generators(L^tau_sigma).
inline void check_sum_rule(const SheafModel& F, const MultiplicityTable& T) {
  const Fan& fan = *F.fan();
  FanPtr fp = F.fan();
  std::map<int, GradedDims> total;
  for (const auto& [tau, w] : T.dims) {
    SheafModel Lt = minimal_extension_sheaf(fp, tau, F.cap());
    for (int s : fan.star(tau)) {
      GradedDims c = convolve(w, Lt.generator_dims(s));
      for (auto [d, n] : c) total[s][d] += n;
    }
  }
  for (int s = 0; s < fan.num_cones(); ++s)
    if (prune(total[s]) != F.generator_dims(s))
      fail(ErrorKind::SumRuleViolation, "multiplicities do not account for the stalk at cone " + std::to_string(s));
}

// Action of a piecewise linear function on the source on the multiplicity
// spaces of pi_* G: W_sigma^d -> W_sigma^{d+2}.
inline std::map<int, std::map<int, Matrix>> function_action(const Pushforward& P, const MultiplicityTable& T,
                                                            const PiecewiseLinear& lhat) {
  std::map<int, std::map<int, Matrix>> out;
  const SheafModel& F = *P.F;
  const SheafModel& G = *P.G;
  for (const auto& [s, bydeg] : T.basis) {
    const SectionSpace& S = *P.fiber.at(s);
    for (const auto& [d, W] : bydeg) {
      auto nx = bydeg.find(d + 2);
      if (d + 2 > F.cap()) continue;
      Matrix act(nx == bydeg.end() ? 0 : nx->second.cols(), W.cols());
      auto form = [&](int c) { return G.restrict_form(c, lhat.form_on(c)); };
      for (int k = 0; k < W.cols(); ++k) {
        Vec free(F.stalk_dim(s, d));
        const auto& idx = T.gens.at(s).at(d);
        for (size_t j = 0; j < idx.size(); ++j) free[F.generator_offset(s, idx[j], d)] = W(int(j), k);
        SparseVec sec = P.to_section(s, d, free);
        const SectionBlock& a = S.block(d);
        const SectionBlock& b = S.block(d + 2);
        Vec coords = b.coordinates(multiply_section(G, sec, a, b, form));
        Vec f2 = P.realize_inv(s, d + 2) * coords;
        // reduce modulo m_sigma: constant coefficients of degree-(d+2) generators
        std::vector<int> idx2;
        for (size_t j = 0; j < F.generators(s).size(); ++j)
          if (F.generators(s)[j] == d + 2) idx2.push_back(int(j));
        Vec bar(idx2.size());
        for (size_t j = 0; j < idx2.size(); ++j) bar[j] = f2[F.generator_offset(s, idx2[j], d + 2)];
        if (nx == bydeg.end()) {
          require(is_zero(bar), ErrorKind::KernelNotPreserved, "function does not preserve the multiplicity space");
          continue;
        }
        auto x = solve(nx->second, bar);
        require(x.has_value(), ErrorKind::KernelNotPreserved, "function does not preserve the multiplicity space");
        act.set_col(k, *x);
      }
      out[s][d] = act;
    }
  }
  return out;
}

}  // namespace fanih
