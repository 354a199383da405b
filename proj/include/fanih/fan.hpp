#pragma once

// Rational polyhedral fans: validation, face lattice, orientations, support
// classification.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "fanih/linalg.hpp"

namespace fanih {

struct Cone {
  std::vector<int> rays;      // sorted ray indices (lineality not listed)
  int dim = 0;                // includes the lineality space
  std::vector<int> facets;    // ids of codimension-one faces
  std::vector<int> cofacets;  // ids of cones having this one as a facet
  std::vector<int> faces;     // all faces including itself, ascending id
  Matrix span_basis;          // rows: lineality basis, then independent rays
  Matrix normals;             // inner facet normals, aligned with `facets`
  Matrix equations;           // rows spanning the annihilator of the span
  bool maximal = false;

  bool simplicial(int lineality_dim) const { return int(rays.size()) + lineality_dim == dim; }
};

enum class SupportClass { Complete, Convex, QuasiConvex, None };

inline const char* support_name(SupportClass s) {
  switch (s) {
    case SupportClass::Complete: return "complete";
    case SupportClass::Convex: return "convex";
    case SupportClass::QuasiConvex: return "quasi_convex";
    case SupportClass::None: return "none";
  }
  return "none";
}

class Fan;
Fan build_fan(int ambient_dim, std::vector<Vec> rays, std::vector<std::vector<int>> cones, Matrix lineality);

class Fan {
 public:
  int ambient_dim() const { return n_; }
  int lineality_dim() const { return lineality_.rows(); }
  const Matrix& lineality() const { return lineality_; }
  bool pointed() const { return lineality_.rows() == 0; }
  const std::vector<Vec>& rays() const { return rays_; }
  const Vec& ray(int i) const { return rays_[i]; }
  int num_rays() const { return int(rays_.size()); }
  int num_cones() const { return int(cones_.size()); }
  const Cone& cone(int id) const { return cones_[id]; }
  const std::vector<Cone>& cones() const { return cones_; }
  const std::vector<int>& maximal_cones() const { return maximal_; }
  // Maximal cones in the order they were supplied to build_fan.
  const std::vector<int>& input_order() const { return input_order_; }
  int origin() const { return 0; }
  int dim() const {
    int d = 0;
    for (int m : maximal_) d = std::max(d, cones_[m].dim);
    return d;
  }

  int find_cone(std::vector<int> rays) const {
    std::sort(rays.begin(), rays.end());
    auto it = index_.find(rays);
    return it == index_.end() ? -1 : it->second;
  }

  bool is_face(int tau, int sigma) const {
    const auto& f = cones_[sigma].faces;
    return std::binary_search(f.begin(), f.end(), tau);
  }

  bool simplicial() const {
    for (const auto& c : cones_)
      if (!c.simplicial(lineality_dim())) return false;
    return true;
  }
  bool simplicial(int id) const { return cones_[id].simplicial(lineality_dim()); }

  bool pure() const {
    for (int m : maximal_)
      if (cones_[m].dim != cones_[maximal_[0]].dim) return false;
    return true;
  }

  // Cones containing tau (its open star), ascending id.
  std::vector<int> star(int tau) const {
    std::vector<int> s;
    for (int c = 0; c < num_cones(); ++c)
      if (is_face(tau, c)) s.push_back(c);
    return s;
  }

  // Smallest subfan containing the given cones.
  std::vector<int> closure(const std::vector<int>& cs) const {
    std::set<int> s;
    for (int c : cs) s.insert(cones_[c].faces.begin(), cones_[c].faces.end());
    return {s.begin(), s.end()};
  }

  std::vector<int> all_cones() const {
    std::vector<int> v(cones_.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = int(i);
    return v;
  }

  // Proper faces of sigma.
  std::vector<int> boundary_of(int sigma) const {
    std::vector<int> v;
    for (int f : cones_[sigma].faces)
      if (f != sigma) v.push_back(f);
    return v;
  }

  // Codimension-one cones lying in exactly one top-dimensional cone.
  std::vector<int> boundary_walls() const {
    int d = dim();
    std::vector<int> w;
    for (int c = 0; c < num_cones(); ++c) {
      if (cones_[c].dim != d - 1) continue;
      int cnt = 0;
      for (int u : cones_[c].cofacets)
        if (cones_[u].dim == d) ++cnt;
      if (cnt == 1) w.push_back(c);
    }
    return w;
  }

  // The boundary subfan; empty for complete fans.
  std::vector<int> boundary() const { return closure(boundary_walls()); }

  // Codimension-one cones lying in exactly two top-dimensional cones.
  std::vector<int> interior_walls() const {
    int d = dim();
    std::vector<int> w;
    for (int c = 0; c < num_cones(); ++c) {
      if (cones_[c].dim != d - 1) continue;
      int cnt = 0;
      for (int u : cones_[c].cofacets)
        if (cones_[u].dim == d) ++cnt;
      if (cnt == 2) w.push_back(c);
    }
    return w;
  }

  bool contains(int sigma, const Vec& x) const {
    const Cone& c = cones_[sigma];
    for (int i = 0; i < c.equations.rows(); ++i)
      if (dot(c.equations.row(i), x) != 0) return false;
    for (int i = 0; i < c.normals.rows(); ++i)
      if (dot(c.normals.row(i), x) < 0) return false;
    return true;
  }

  // Cone whose relative interior contains x, or -1 outside the support.
  int locate(const Vec& x) const {
    for (int m : maximal_) {
      if (!contains(m, x)) continue;
      const Cone& c = cones_[m];
      std::vector<int> rays = c.rays;
      for (int i = 0; i < c.normals.rows(); ++i) {
        if (dot(c.normals.row(i), x) != 0) continue;
        const auto& fr = cones_[c.facets[i]].rays;
        std::vector<int> keep;
        std::set_intersection(rays.begin(), rays.end(), fr.begin(), fr.end(), std::back_inserter(keep));
        rays = keep;
      }
      return find_cone(rays);
    }
    return -1;
  }

  Vec barycenter(int sigma) const {
    Vec b(n_);
    for (int r : cones_[sigma].rays)
      for (int i = 0; i < n_; ++i) b[i] += rays_[r][i];
    return b;
  }

  // Coordinates of x (assumed in Span sigma) in the span basis of sigma.
  Vec span_coordinates(int sigma, const Vec& x) const {
    const Matrix& b = cones_[sigma].span_basis;
    auto s = solve(b.transpose(), x);
    require(s.has_value(), ErrorKind::DimensionMismatch, "vector not in span of cone");
    return *s;
  }

  // Orientation incidence [sigma : tau] for a facet tau of sigma: sign of the
  // determinant of (inward vector, basis of tau) in the basis of sigma.
  int incidence_sign(int sigma, int tau) const {
    const Cone& s = cones_[sigma];
    const Cone& t = cones_[tau];
    int w = -1;
    for (int r : s.rays)
      if (!std::binary_search(t.rays.begin(), t.rays.end(), r)) {
        w = r;
        break;
      }
    require(w >= 0, ErrorKind::NotAFace, "incidence of non-facet");
    Matrix m(s.dim, s.dim);
    m.set_col(0, span_coordinates(sigma, rays_[w]));
    for (int i = 0; i < t.span_basis.rows(); ++i) m.set_col(i + 1, span_coordinates(sigma, t.span_basis.row(i)));
    return sgn(determinant(m));
  }

  SupportClass classify_support() const;

  // Reduced rational Betti numbers of the boundary complex (index k -> b~_k,
  // starting at k = -1).
  std::vector<int> boundary_reduced_betti() const;

 private:
  friend Fan build_fan(int, std::vector<Vec>, std::vector<std::vector<int>>, Matrix);
  int n_ = 0;
  Matrix lineality_;
  std::vector<Vec> rays_;
  std::vector<Cone> cones_;
  std::vector<int> maximal_;
  std::vector<int> input_order_;
  std::map<std::vector<int>, int> index_;
};

using FanPtr = std::shared_ptr<const Fan>;

namespace detail {

// Rows of a basis for span(rows).
inline Matrix row_basis(const std::vector<Vec>& rows, int n) {
  if (rows.empty()) return Matrix(0, n);
  Matrix m = Matrix::from_rows(rows, n);
  auto piv = independent_columns(m.transpose());
  return m.select_rows(piv);
}

struct FaceInfo {
  int dim = 0;
  Matrix span_basis, normals, equations;
  std::vector<std::vector<int>> facets;
};

struct LatticeBuilder {
  int n = 0;
  Matrix lin;                   // lineality rows
  std::vector<Vec> rays;
  std::map<std::vector<int>, FaceInfo> faces;

  void visit(const std::vector<int>& rs) {
    if (faces.count(rs)) return;
    FaceInfo info;
    std::vector<Vec> gens;
    for (int i = 0; i < lin.rows(); ++i) gens.push_back(lin.row(i));
    int l = lin.rows();
    std::vector<int> basis_rays;
    {
      std::vector<Vec> cur = gens;
      for (int r : rs) {
        cur.push_back(rays[r]);
        if (rank(Matrix::from_rows(cur, n)) == int(cur.size()))
          basis_rays.push_back(r);
        else
          cur.pop_back();
      }
      info.span_basis = Matrix::from_rows(cur, n);
    }
    int d = info.span_basis.rows();
    info.dim = d;
    {
      Matrix k = kernel(info.span_basis.rows() ? info.span_basis : Matrix(0, n));
      if (info.span_basis.rows() == 0) k = Matrix::identity(n);
      info.equations = k.transpose();
    }
    // coordinates map C: x in span -> coords; C = (B B^T)^{-1} B
    Matrix B = info.span_basis;
    std::vector<Vec> coords;
    Matrix C;
    if (d > 0) {
      C = inverse(B * B.transpose()) * B;
      for (int r : rs) coords.push_back(C * rays[r]);
    }
    std::vector<std::pair<std::vector<int>, Vec>> found;
    int need = d - 1 - l;  // rays spanning a facet together with the lineality
    if (!rs.empty() && need >= 0) {
      std::vector<int> pick;
      std::function<void(int)> rec = [&](int start) {
        if (int(pick.size()) == need) {
          std::vector<Vec> rows;
          for (int i = 0; i < l; ++i) rows.push_back(C * lin.row(i));
          for (int p : pick) rows.push_back(coords[p]);
          Matrix k;
          if (rows.empty()) {
            k = Matrix::identity(d);
          } else {
            k = kernel(Matrix::from_rows(rows, d));
          }
          if (k.cols() != 1) return;
          Vec w = k.col(0);
          int s = 0;
          bool ok = true;
          std::vector<int> on;
          for (size_t i = 0; i < rs.size(); ++i) {
            int v = sgn(dot(w, coords[i]));
            if (v == 0) {
              on.push_back(rs[i]);
              continue;
            }
            if (s == 0) s = v;
            if (v != s) {
              ok = false;
              break;
            }
          }
          if (!ok || s == 0) return;
          for (auto& x : w) x *= s;
          for (const auto& f : found)
            if (f.first == on) return;
          // ambient inner normal
          Vec u(n);
          for (int j = 0; j < n; ++j)
            for (int i = 0; i < d; ++i) u[j] += w[i] * C(i, j);
          found.emplace_back(on, normalize_direction(u, false));
          return;
        }
        for (size_t i = start; i < rs.size(); ++i) {
          pick.push_back(int(i));
          rec(int(i) + 1);
          pick.pop_back();
        }
      };
      rec(0);
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    info.normals = Matrix(int(found.size()), n);
    for (size_t i = 0; i < found.size(); ++i) {
      info.facets.push_back(found[i].first);
      for (int j = 0; j < n; ++j) info.normals(int(i), j) = found[i].second[j];
    }
    faces[rs] = info;
    for (const auto& f : info.facets) visit(f);
  }
};

// Extreme rays of {x : E x = 0, N x >= 0}, assumed pointed.
inline std::vector<Vec> extreme_rays(const Matrix& eq, const Matrix& ineq, int n) {
  std::vector<Vec> out;
  int e = rank(eq.rows() ? eq : Matrix(0, n));
  int need = n - 1 - e;
  if (need < 0) return out;
  std::vector<int> pick;
  std::vector<Vec> base;
  for (int i = 0; i < eq.rows(); ++i) base.push_back(eq.row(i));
  std::function<void(int)> rec = [&](int start) {
    if (int(pick.size()) == need) {
      std::vector<Vec> rows = base;
      for (int p : pick) rows.push_back(ineq.row(p));
      Matrix k = rows.empty() ? Matrix::identity(n) : kernel(Matrix::from_rows(rows, n));
      if (k.cols() != 1) return;
      Vec r = k.col(0);
      for (int sgn_try : {1, -1}) {
        Vec c = r;
        for (auto& x : c) x *= sgn_try;
        bool ok = true;
        for (int i = 0; i < ineq.rows() && ok; ++i)
          if (dot(ineq.row(i), c) < 0) ok = false;
        if (ok) {
          c = normalize_direction(c, false);
          if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
        }
      }
      return;
    }
    for (int i = start; i < ineq.rows(); ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace detail

// Validate and assemble a fan from rays (ambient coordinates) and a list of
// cones given by ray indices (typically the maximal ones).  `lineality` holds
// a basis of the common lineality space as rows (may be empty).
inline Fan build_fan(int ambient_dim, std::vector<Vec> rays, std::vector<std::vector<int>> cones,
                     Matrix lineality = Matrix()) {
  int n = ambient_dim;
  if (lineality.cols() == 0) lineality = Matrix(0, n);
  require(lineality.cols() == n, ErrorKind::DimensionMismatch, "lineality basis has wrong width");
  require(rank(lineality) == lineality.rows(), ErrorKind::InvalidInput, "lineality rows are dependent");
  for (const auto& r : rays) {
    require(int(r.size()) == n, ErrorKind::DimensionMismatch, "ray has wrong dimension");
    require(!is_zero(r), ErrorKind::DegenerateRay, "zero ray");
    std::vector<Vec> rows;
    for (int i = 0; i < lineality.rows(); ++i) rows.push_back(lineality.row(i));
    rows.push_back(r);
    require(rank(Matrix::from_rows(rows, n)) == int(rows.size()), ErrorKind::DegenerateRay,
            "ray lies in the lineality space");
  }
  // rays must be pairwise distinct directions modulo lineality
  for (size_t i = 0; i < rays.size(); ++i)
    for (size_t j = i + 1; j < rays.size(); ++j) {
      std::vector<Vec> rows;
      for (int k = 0; k < lineality.rows(); ++k) rows.push_back(lineality.row(k));
      rows.push_back(rays[i]);
      rows.push_back(rays[j]);
      if (rank(Matrix::from_rows(rows, n)) < int(rows.size())) {
        // a r_i + b r_j lies in the lineality; same direction iff a b < 0
        Matrix k = kernel(Matrix::from_rows(rows, n).transpose());
        Rational a = k(k.rows() - 2, 0), b = k(k.rows() - 1, 0);
        if (sgn(a) * sgn(b) < 0)
          fail(ErrorKind::DegenerateRay, "duplicate ray " + std::to_string(i) + "," + std::to_string(j));
      }
    }
  std::vector<bool> used(rays.size(), false);
  detail::LatticeBuilder lb;
  lb.n = n;
  lb.lin = lineality;
  lb.rays = rays;
  std::vector<std::vector<int>> listed;
  for (auto c : cones) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (int r : c) {
      require(r >= 0 && r < int(rays.size()), ErrorKind::InvalidInput, "ray index out of range");
      used[r] = true;
    }
    lb.visit(c);
    // every listed ray must be extreme
    for (int r : c)
      require(lb.faces.count({r}) && lb.faces.at({r}).dim == lineality.rows() + 1, ErrorKind::NotAFace,
              "ray " + std::to_string(r) + " is not an extreme ray of its cone");
    // and every face of dimension k must have at least k - l rays (pointedness)
    listed.push_back(c);
  }
  for (size_t r = 0; r < rays.size(); ++r)
    require(used[r], ErrorKind::InvalidInput, "ray " + std::to_string(r) + " is in no cone");
  for (const auto& [rs, info] : lb.faces)
    require(info.dim == lineality.rows() + 1 ? rs.size() == 1 : true, ErrorKind::NotAFace,
            "cone is not pointed modulo the lineality");
  lb.visit({});
  // listed cones that are faces of other listed cones are not maximal
  std::set<std::vector<int>> maxset;
  auto is_face_set = [&](const std::vector<int>& small, const std::vector<int>& big) {
    std::function<bool(const std::vector<int>&)> rec = [&](const std::vector<int>& cur) {
      if (cur == small) return true;
      if (cur.size() <= small.size()) return false;
      if (!std::includes(cur.begin(), cur.end(), small.begin(), small.end())) return false;
      for (const auto& f : lb.faces.at(cur).facets)
        if (rec(f)) return true;
      return false;
    };
    return rec(big);
  };
  std::vector<std::vector<int>> order;
  for (size_t i = 0; i < listed.size(); ++i) {
    bool sub = false;
    for (size_t j = 0; j < listed.size() && !sub; ++j)
      if (i != j && listed[i] != listed[j] && is_face_set(listed[i], listed[j])) sub = true;
    if (!sub && !maxset.count(listed[i])) {
      maxset.insert(listed[i]);
      order.push_back(listed[i]);
    }
  }
  if (listed.empty()) order.push_back({}), maxset.insert({});

  // pairwise intersections of maximal cones must be common faces
  std::vector<std::vector<int>> mx(maxset.begin(), maxset.end());
  for (size_t a = 0; a < mx.size(); ++a)
    for (size_t b = a + 1; b < mx.size(); ++b) {
      const auto& A = mx[a];
      const auto& Bv = mx[b];
      std::vector<int> common;
      std::set_intersection(A.begin(), A.end(), Bv.begin(), Bv.end(), std::back_inserter(common));
      bool face_a = lb.faces.count(common) && is_face_set(common, A);
      bool face_b = lb.faces.count(common) && is_face_set(common, Bv);
      if (!face_a || !face_b)
        fail(ErrorKind::OverlappingCones, "cones intersect outside a common face");
      const auto& fa = lb.faces.at(A);
      const auto& fb = lb.faces.at(Bv);
      // face normal: sum of facet normals whose facet contains `common`
      auto face_normal = [&](const detail::FaceInfo& fi) {
        Vec u(n);
        for (size_t i = 0; i < fi.facets.size(); ++i)
          if (std::includes(fi.facets[i].begin(), fi.facets[i].end(), common.begin(), common.end()))
            for (int j = 0; j < n; ++j) u[j] += fi.normals(int(i), j);
        return u;
      };
      Vec ua = face_normal(fa), ub = face_normal(fb);
      auto separates = [&](const Vec& u) {
        for (int r : A) {
          int s = sgn(dot(u, rays[r]));
          bool in = std::binary_search(common.begin(), common.end(), r);
          if (s < 0 || (s == 0) != in) return false;
        }
        for (int r : Bv) {
          int s = sgn(dot(u, rays[r]));
          bool in = std::binary_search(common.begin(), common.end(), r);
          if (s > 0 || (s == 0) != in) return false;
        }
        // must also separate when the cones are not full-dimensional
        for (int i = 0; i < lineality.rows(); ++i)
          if (dot(u, lineality.row(i)) != 0) return false;
        return true;
      };
      Vec diff(n), neg(n);
      for (int j = 0; j < n; ++j) {
        diff[j] = ua[j] - ub[j];
        neg[j] = -ub[j];
      }
      if (separates(ua) || separates(neg) || separates(diff)) continue;
      // general case: enumerate extreme rays of the intersection modulo lineality
      Matrix eq = Matrix::vconcat(fa.equations, fb.equations);
      eq = Matrix::vconcat(eq, lineality);
      Matrix ineq = Matrix::vconcat(fa.normals, fb.normals);
      auto ext = detail::extreme_rays(eq, ineq, n);
      // intersection modulo lineality: work in the complement via the
      // lineality equations added above, so extreme rays are honest.
      const auto& fc = lb.faces.at(common);
      for (const auto& r : ext) {
        bool in = true;
        for (int i = 0; i < fc.equations.rows() && in; ++i)
          if (dot(fc.equations.row(i), r) != 0) in = false;
        for (int i = 0; i < fc.normals.rows() && in; ++i)
          if (dot(fc.normals.row(i), r) < 0) in = false;
        if (!in) fail(ErrorKind::OverlappingCones, "cones intersect outside a common face");
      }
    }

  // assemble
  Fan f;
  f.n_ = n;
  f.lineality_ = lineality;
  f.rays_ = rays;
  std::vector<std::vector<int>> sets;
  for (const auto& [rs, info] : lb.faces) {
    // keep only faces of maximal cones
    bool keep = false;
    for (const auto& m : mx)
      if (is_face_set(rs, m)) {
        keep = true;
        break;
      }
    if (keep) sets.push_back(rs);
  }
  std::sort(sets.begin(), sets.end(), [&](const auto& a, const auto& b) {
    int da = lb.faces.at(a).dim, db = lb.faces.at(b).dim;
    if (da != db) return da < db;
    return a < b;
  });
  for (size_t i = 0; i < sets.size(); ++i) f.index_[sets[i]] = int(i);
  f.cones_.resize(sets.size());
  for (size_t i = 0; i < sets.size(); ++i) {
    const auto& info = lb.faces.at(sets[i]);
    Cone& c = f.cones_[i];
    c.rays = sets[i];
    c.dim = info.dim;
    c.span_basis = info.span_basis;
    c.normals = info.normals;
    c.equations = info.equations;
    for (const auto& fs : info.facets) c.facets.push_back(f.index_.at(fs));
  }
  for (size_t i = 0; i < sets.size(); ++i)
    for (int fc : f.cones_[i].facets) f.cones_[fc].cofacets.push_back(int(i));
  for (auto& c : f.cones_) std::sort(c.cofacets.begin(), c.cofacets.end());
  for (size_t i = 0; i < sets.size(); ++i) {
    std::set<int> all{int(i)};
    for (int fc : f.cones_[i].facets) all.insert(f.cones_[fc].faces.begin(), f.cones_[fc].faces.end());
    f.cones_[i].faces.assign(all.begin(), all.end());
  }
  for (const auto& m : mx) {
    int id = f.index_.at(m);
    f.cones_[id].maximal = true;
    f.maximal_.push_back(id);
  }
  std::sort(f.maximal_.begin(), f.maximal_.end());
  for (const auto& o : order) f.input_order_.push_back(f.index_.at(o));
  return f;
}

inline std::vector<int> Fan::boundary_reduced_betti() const {
  std::vector<int> bd = boundary();
  std::vector<int> cells;
  for (int c : bd)
    if (c != origin()) cells.push_back(c);
  // order complex of the face poset of nonzero boundary cones
  std::vector<std::vector<int>> chains;
  std::function<void(std::vector<int>&)> extend = [&](std::vector<int>& ch) {
    chains.push_back(ch);
    for (int c : cells)
      if (cones_[c].dim > cones_[ch.back()].dim && is_face(ch.back(), c)) {
        ch.push_back(c);
        extend(ch);
        ch.pop_back();
      }
  };
  for (int c : cells) {
    std::vector<int> ch{c};
    extend(ch);
  }
  int top = 0;
  for (const auto& ch : chains) top = std::max(top, int(ch.size()) - 1);
  // simplices by dimension; dimension -1 is the empty simplex
  std::vector<std::vector<std::vector<int>>> byd(top + 2);
  byd[0].push_back({});
  for (auto& ch : chains) byd[ch.size()].push_back(ch);
  for (auto& v : byd) std::sort(v.begin(), v.end());
  std::vector<int> ranks(top + 3, 0);  // ranks[k] = rank of boundary from dim k-1 simplices (index k) to index k-1
  for (int k = 1; k <= top + 1; ++k) {
    std::map<std::vector<int>, int> idx;
    for (size_t i = 0; i < byd[k - 1].size(); ++i) idx[byd[k - 1][i]] = int(i);
    SparseEliminator el(int(byd[k - 1].size()));
    for (const auto& s : byd[k]) {
      SparseVec row;
      for (size_t i = 0; i < s.size(); ++i) {
        std::vector<int> face = s;
        face.erase(face.begin() + i);
        row.emplace_back(idx.at(face), Rational((i % 2) ? -1 : 1));
      }
      std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      el.add_row(row);
    }
    ranks[k] = el.rank();
  }
  std::vector<int> betti(top + 2);
  for (int k = 0; k <= top + 1; ++k) betti[k] = int(byd[k].size()) - ranks[k] - ranks[k + 1];
  return betti;
}

inline SupportClass Fan::classify_support() const {
  int d = cones_[maximal_[0]].dim;
  for (int m : maximal_)
    require(cones_[m].dim == d, ErrorKind::MixedDimension, "maximal cones of different dimensions");
  if (d < n_) return SupportClass::None;
  auto walls = boundary_walls();
  if (walls.empty()) return SupportClass::Complete;
  bool convex = true;
  for (int w : walls) {
    int sigma = -1;
    for (int u : cones_[w].cofacets)
      if (cones_[u].dim == d) sigma = u;
    const Cone& s = cones_[sigma];
    size_t k = std::find(s.facets.begin(), s.facets.end(), w) - s.facets.begin();
    Vec u = s.normals.row(int(k));
    for (const auto& r : rays_)
      if (dot(u, r) < 0) convex = false;
    if (!convex) break;
  }
  if (convex) return SupportClass::Convex;
  // compare with a homology sphere of dimension n - 2 (modulo lineality)
  auto b = boundary_reduced_betti();
  int target = n_ - lineality_dim() - 2;  // homological dimension
  for (int k = -1; k + 1 < int(b.size()); ++k) {
    int want = (k == target) ? 1 : 0;
    if (b[k + 1] != want) return SupportClass::None;
  }
  if (target + 1 >= int(b.size())) return SupportClass::None;
  return SupportClass::QuasiConvex;
}

}  // namespace fanih
