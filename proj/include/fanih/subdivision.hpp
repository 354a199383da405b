#pragma once

// Subdivisions of fans and the standard constructions on them: star and
// barycentric subdivision, completion of convex fans, products, quotient stars
// and fibres over target cones.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "fanih/fan.hpp"

namespace fanih {

struct SubdivisionMap {
  FanPtr source, target;
  std::vector<int> assignment;  // source cone id -> smallest target cone containing it

  int operator()(int nu) const { return assignment[nu]; }

  // Source cones lying over faces of sigma (the subfan over [sigma]).
  std::vector<int> fiber(int sigma) const {
    std::vector<int> v;
    for (int c = 0; c < source->num_cones(); ++c)
      if (target->is_face(assignment[c], sigma)) v.push_back(c);
    return v;
  }
  // Source cones whose relative interior lies in the relative interior of sigma.
  std::vector<int> preimage(int sigma) const {
    std::vector<int> v;
    for (int c = 0; c < source->num_cones(); ++c)
      if (assignment[c] == sigma) v.push_back(c);
    return v;
  }
  // Subfan of the source lying over the given target subfan.
  std::vector<int> over(const std::vector<int>& target_cones) const {
    std::set<int> t(target_cones.begin(), target_cones.end());
    std::vector<int> v;
    for (int c = 0; c < source->num_cones(); ++c)
      if (t.count(assignment[c])) v.push_back(c);
    return v;
  }
};

inline SubdivisionMap make_subdivision(FanPtr source, FanPtr target,
                                       const std::vector<int>* given = nullptr) {
  require(source->ambient_dim() == target->ambient_dim(), ErrorKind::NotASubdivision, "ambient dimensions differ");
  {
    std::vector<Vec> rows;
    for (int i = 0; i < source->lineality_dim(); ++i) rows.push_back(source->lineality().row(i));
    int rs = source->lineality_dim();
    for (int i = 0; i < target->lineality_dim(); ++i) rows.push_back(target->lineality().row(i));
    int n = source->ambient_dim();
    require(rs == target->lineality_dim() && (rows.empty() || rank(Matrix::from_rows(rows, n)) == rs),
            ErrorKind::NotASubdivision, "lineality spaces differ");
  }
  SubdivisionMap m;
  m.source = source;
  m.target = target;
  m.assignment.resize(source->num_cones());
  for (int c = 0; c < source->num_cones(); ++c) {
    int t = target->locate(source->barycenter(c));
    require(t >= 0, ErrorKind::NotASubdivision, "source cone outside the target support");
    for (int r : source->cone(c).rays)
      require(target->contains(t, source->ray(r)), ErrorKind::NotASubdivision, "source cone not inside a target cone");
    m.assignment[c] = t;
  }
  // every target cone must be covered by the source cones over it
  for (int s = 0; s < target->num_cones(); ++s) {
    int d = target->cone(s).dim;
    std::vector<int> pre = m.preimage(s);
    std::vector<int> top;
    for (int c : pre)
      if (source->cone(c).dim == d) top.push_back(c);
    require(!top.empty(), ErrorKind::NotASubdivision, "target cone not covered");
    for (int c : pre) {
      bool in_top = false;
      for (int t : top)
        if (source->is_face(c, t)) in_top = true;
      require(in_top, ErrorKind::NotASubdivision, "dangling source cone");
      if (source->cone(c).dim == d - 1) {
        int cnt = 0;
        for (int u : source->cone(c).cofacets)
          if (m.assignment[u] == s && source->cone(u).dim == d) ++cnt;
        require(cnt == 2, ErrorKind::NotASubdivision, "target cone not covered");
      }
    }
  }
  if (given) {
    require(*given == m.assignment, ErrorKind::NotASubdivision, "supplied assignment disagrees with geometry");
  }
  return m;
}

inline SubdivisionMap identity_subdivision(FanPtr f) {
  SubdivisionMap m;
  m.source = m.target = f;
  m.assignment = f->all_cones();
  return m;
}

inline SubdivisionMap compose(const SubdivisionMap& first, const SubdivisionMap& second) {
  SubdivisionMap m;
  m.source = first.source;
  m.target = second.target;
  m.assignment.resize(first.assignment.size());
  for (size_t i = 0; i < first.assignment.size(); ++i) m.assignment[i] = second.assignment[first.assignment[i]];
  return m;
}

inline std::vector<std::vector<int>> maximal_ray_sets(const Fan& f) {
  std::vector<std::vector<int>> v;
  for (int m : f.maximal_cones()) v.push_back(f.cone(m).rays);
  return v;
}

// Star subdivision of `fan` at cone sigma along a ray in its relative interior.
inline SubdivisionMap star_subdivision(FanPtr fan, int sigma, const Vec& ray) {
  require(sigma >= 0 && sigma < fan->num_cones(), ErrorKind::InvalidInput, "no such cone");
  require(int(ray.size()) == fan->ambient_dim(), ErrorKind::DimensionMismatch, "ray has wrong dimension");
  require(fan->locate(ray) == sigma, ErrorKind::RayNotInterior, "ray not in the relative interior of the cone");
  require(fan->cone(sigma).rays.size() >= 2, ErrorKind::InvalidInput, "star subdivision needs a cone of dimension >= 2");
  std::vector<Vec> rays = fan->rays();
  int rho = int(rays.size());
  rays.push_back(ray);
  std::vector<std::vector<int>> cones;
  for (int m : fan->maximal_cones()) {
    if (!fan->is_face(sigma, m)) {
      cones.push_back(fan->cone(m).rays);
      continue;
    }
    for (int f : fan->cone(m).facets) {
      if (fan->is_face(sigma, f)) continue;
      auto r = fan->cone(f).rays;
      r.push_back(rho);
      cones.push_back(r);
    }
  }
  auto src = std::make_shared<const Fan>(build_fan(fan->ambient_dim(), rays, cones, fan->lineality()));
  return make_subdivision(src, fan);
}

struct BarycentricSubdivision {
  SubdivisionMap map;                 // composite map to the original fan
  std::vector<SubdivisionMap> steps;  // individual star subdivisions, in order
};

// Star subdivide at the barycenter of every cone of dimension >= 2, largest
// cones first.
inline BarycentricSubdivision barycentric_subdivision(FanPtr fan) {
  require(fan->pointed(), ErrorKind::NotPointed, "barycentric subdivision needs a pointed fan");
  std::vector<int> order;
  for (int c = 0; c < fan->num_cones(); ++c)
    if (fan->cone(c).dim >= 2) order.push_back(c);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return fan->cone(a).dim > fan->cone(b).dim; });
  BarycentricSubdivision out;
  FanPtr cur = fan;
  for (int c : order) {
    int id = cur->find_cone(fan->cone(c).rays);
    require(id >= 0, ErrorKind::InvalidInput, "cone vanished during barycentric subdivision");
    out.steps.push_back(star_subdivision(cur, id, fan->barycenter(c)));
    cur = out.steps.back().source;
  }
  out.map = out.steps.empty() ? identity_subdivision(fan) : make_subdivision(cur, fan);
  return out;
}

// Extend a convex, non-complete fan to a complete one by coning its boundary
// from rho, where -rho lies in the interior of the support.
inline Fan complete_convex_fan(FanPtr fan, const Vec& rho) {
  require(fan->classify_support() == SupportClass::Convex, ErrorKind::NotConvex, "fan support is not convex");
  for (int w : fan->boundary_walls()) {
    int sigma = -1;
    for (int u : fan->cone(w).cofacets)
      if (fan->cone(u).maximal) sigma = u;
    const Cone& s = fan->cone(sigma);
    size_t k = std::find(s.facets.begin(), s.facets.end(), w) - s.facets.begin();
    require(dot(s.normals.row(int(k)), rho) < 0, ErrorKind::RayNotOpposite, "-rho is not interior to the support");
  }
  std::vector<Vec> rays = fan->rays();
  int r = int(rays.size());
  rays.push_back(rho);
  auto cones = maximal_ray_sets(*fan);
  for (int w : fan->boundary_walls()) {
    auto c = fan->cone(w).rays;
    c.push_back(r);
    cones.push_back(c);
  }
  return build_fan(fan->ambient_dim(), rays, cones, fan->lineality());
}

inline Fan product_fan(const Fan& a, const Fan& b) {
  int na = a.ambient_dim(), nb = b.ambient_dim(), n = na + nb;
  std::vector<Vec> rays;
  for (const auto& r : a.rays()) {
    Vec v(n);
    for (int i = 0; i < na; ++i) v[i] = r[i];
    rays.push_back(v);
  }
  for (const auto& r : b.rays()) {
    Vec v(n);
    for (int i = 0; i < nb; ++i) v[na + i] = r[i];
    rays.push_back(v);
  }
  std::vector<std::vector<int>> cones;
  for (int x : a.input_order())
    for (int y : b.input_order()) {
      auto c = a.cone(x).rays;
      for (int r : b.cone(y).rays) c.push_back(r + a.num_rays());
      cones.push_back(c);
    }
  Matrix lin(a.lineality_dim() + b.lineality_dim(), n);
  for (int i = 0; i < a.lineality_dim(); ++i)
    for (int j = 0; j < na; ++j) lin(i, j) = a.lineality()(i, j);
  for (int i = 0; i < b.lineality_dim(); ++i)
    for (int j = 0; j < nb; ++j) lin(a.lineality_dim() + i, na + j) = b.lineality()(i, j);
  return build_fan(n, rays, cones, lin);
}

// The fan of cones sigma >= tau pushed into V / Span tau.
struct QuotientFan {
  FanPtr fan;
  Matrix projection;        // q x n, ambient -> quotient coordinates
  Matrix section;           // n x q, quotient -> ambient, complementary to Span tau
  std::vector<int> to_original;  // quotient cone id -> original cone id

  // Descend a linear form vanishing on Span tau.
  Vec descend(const Vec& u) const {
    Vec v(section.cols());
    for (int j = 0; j < section.cols(); ++j)
      for (int i = 0; i < section.rows(); ++i) v[j] += u[i] * section(i, j);
    return v;
  }
};

inline QuotientFan quotient_star(FanPtr fan, int tau) {
  int n = fan->ambient_dim();
  const Cone& t = fan->cone(tau);
  std::vector<Vec> cols;
  for (int i = 0; i < t.span_basis.rows(); ++i) cols.push_back(t.span_basis.row(i));
  std::vector<int> extra;
  for (int j = 0; j < n; ++j) {
    Vec e(n);
    e[j] = 1;
    cols.push_back(e);
    if (rank(Matrix::from_columns(cols, n)) == int(cols.size()))
      extra.push_back(j);
    else
      cols.pop_back();
  }
  Matrix B = Matrix::from_columns(cols, n);
  Matrix Binv = inverse(B);
  int q = int(extra.size());
  QuotientFan out;
  out.projection = Binv.block(t.span_basis.rows(), 0, q, n);
  out.section = Matrix(n, q);
  for (int k = 0; k < q; ++k) out.section(extra[k], k) = 1;
  // rays of the quotient are the cones of star(tau) one dimension up; every
  // ray of such a cone outside tau projects onto the same direction
  std::vector<int> star = fan->star(tau);
  std::map<int, int> ray_of;  // original cone -> quotient ray
  std::vector<Vec> rays;
  for (int f : star) {
    if (fan->cone(f).dim != t.dim + 1) continue;
    int r = -1;
    for (int x : fan->cone(f).rays)
      if (!std::binary_search(t.rays.begin(), t.rays.end(), x)) r = x;
    require(r >= 0, ErrorKind::NotAFace, "cone of the star adds no ray");
    ray_of[f] = int(rays.size());
    rays.push_back(normalize_direction(out.projection * fan->ray(r), false));
  }
  auto quotient_rays = [&](int s) {
    std::vector<int> c;
    for (auto [f, r] : ray_of)
      if (fan->is_face(f, s)) c.push_back(r);
    return c;
  };
  std::vector<std::vector<int>> cones;
  for (int m : fan->maximal_cones())
    if (fan->is_face(tau, m)) cones.push_back(quotient_rays(m));
  out.fan = std::make_shared<const Fan>(build_fan(q, rays, cones, Matrix(0, q)));
  out.to_original.assign(out.fan->num_cones(), -1);
  for (int s : star) {
    int c = out.fan->find_cone(quotient_rays(s));
    require(c >= 0, ErrorKind::NotAFace, "star cone has no image in the quotient");
    out.to_original[c] = s;
  }
  return out;
}

// Reduce a fan with lineality to a pointed fan in V / lineality.
inline QuotientFan pointed_reduction(FanPtr fan) { return quotient_star(fan, fan->origin()); }

// The subfan over [sigma], written in coordinates of the span basis of sigma.
struct FiberFan {
  FanPtr fan;
  Matrix basis;                  // rows: span basis of sigma (ambient)
  std::vector<int> to_source;    // fiber cone id -> source cone id
  std::map<int, int> from_source;

  Vec restrict_form(const Vec& u) const {
    Vec v(basis.rows());
    for (int i = 0; i < basis.rows(); ++i) v[i] = dot(u, basis.row(i));
    return v;
  }
};

inline FiberFan fiber_fan(const SubdivisionMap& pi, int sigma) {
  const Fan& src = *pi.source;
  const Cone& s = pi.target->cone(sigma);
  FiberFan out;
  out.basis = s.span_basis;
  int d = s.dim;
  int l = src.lineality_dim();
  std::map<int, int> ray_map;
  std::vector<Vec> rays;
  std::vector<std::vector<int>> cones;
  for (int c : pi.preimage(sigma)) {
    if (src.cone(c).dim != d) continue;
    std::vector<int> rs;
    for (int r : src.cone(c).rays) {
      if (!ray_map.count(r)) {
        ray_map[r] = int(rays.size());
        rays.push_back(pi.target->span_coordinates(sigma, src.ray(r)));
      }
      rs.push_back(ray_map[r]);
    }
    cones.push_back(rs);
  }
  Matrix lin(l, d);
  for (int i = 0; i < l; ++i) {
    Vec c = pi.target->span_coordinates(sigma, src.lineality().row(i));
    for (int j = 0; j < d; ++j) lin(i, j) = c[j];
  }
  out.fan = std::make_shared<const Fan>(build_fan(d, rays, cones, lin));
  std::map<int, int> back;
  for (auto [o, nr] : ray_map) back[nr] = o;
  out.to_source.resize(out.fan->num_cones());
  for (int c = 0; c < out.fan->num_cones(); ++c) {
    std::vector<int> rs;
    for (int r : out.fan->cone(c).rays) rs.push_back(back[r]);
    out.to_source[c] = src.find_cone(rs);
    out.from_source[out.to_source[c]] = c;
  }
  return out;
}

// For every sigma >= tau, the face sigma' with sigma = tau + sigma' and
// Span tau cap Span sigma' = lineality; nullopt if some sigma has none.
inline std::optional<std::map<int, int>> detect_local_product(const Fan& fan, int tau) {
  const auto& tr = fan.cone(tau).rays;
  std::map<int, int> out;
  for (int s : fan.star(tau)) {
    std::vector<int> rest;
    for (int r : fan.cone(s).rays)
      if (!std::binary_search(tr.begin(), tr.end(), r)) rest.push_back(r);
    int c = fan.find_cone(rest);
    if (c < 0 || !fan.is_face(c, s)) return std::nullopt;
    if (fan.cone(c).dim + fan.cone(tau).dim - fan.lineality_dim() != fan.cone(s).dim) return std::nullopt;
    out[s] = c;
  }
  return out;
}

struct Smallness {
  bool semismall = true;
  bool small = true;
};

inline Smallness detect_semismall(const SubdivisionMap& pi) {
  const Fan& src = *pi.source;
  require(src.simplicial(), ErrorKind::SourceNotSimplicial, "semi-smallness needs a simplicial source");
  Smallness s;
  int l = src.lineality_dim();
  for (int c = 0; c < src.num_cones(); ++c) {
    int dc = src.cone(c).dim - l;
    int dt = pi.target->cone(pi.assignment[c]).dim - l;
    if (dt > 2 * dc) s.semismall = false;
    if (dc > 0 && dt >= 2 * dc) s.small = false;
  }
  if (!s.semismall) s.small = false;
  return s;
}

}  // namespace fanih
