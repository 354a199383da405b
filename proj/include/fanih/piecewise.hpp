#pragma once

// Piecewise linear functions on fans and their convexity certificates.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "fanih/subdivision.hpp"

namespace fanih {

// One ambient linear form per maximal cone, agreeing on shared faces.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  PiecewiseLinear(FanPtr fan, std::map<int, Vec> forms) : fan_(std::move(fan)), forms_(std::move(forms)) {
    validate();
  }

  static PiecewiseLinear linear(FanPtr fan, const Vec& u) {
    std::map<int, Vec> f;
    for (int m : fan->maximal_cones()) f[m] = u;
    return PiecewiseLinear(fan, f);
  }

  static PiecewiseLinear zero(FanPtr fan) { return linear(fan, Vec(fan->ambient_dim())); }

  // Simplicial fans only: the function with the given value on each ray (and
  // zero on the lineality).
  static PiecewiseLinear from_ray_values(FanPtr fan, const Vec& values) {
    require(fan->simplicial(), ErrorKind::NotPiecewiseLinear, "ray values need a simplicial fan");
    require(int(values.size()) == fan->num_rays(), ErrorKind::DimensionMismatch, "one value per ray");
    int n = fan->ambient_dim();
    std::map<int, Vec> f;
    for (int m : fan->maximal_cones()) {
      const Cone& c = fan->cone(m);
      // u . b = value for each basis vector of the span; u . e = 0 on equations' complement
      std::vector<Vec> rows;
      Vec rhs;
      for (int i = 0; i < fan->lineality_dim(); ++i) {
        rows.push_back(fan->lineality().row(i));
        rhs.push_back(0);
      }
      for (int r : c.rays) {
        rows.push_back(fan->ray(r));
        rhs.push_back(values[r]);
      }
      auto u = solve(Matrix::from_rows(rows, n), rhs);
      require(u.has_value(), ErrorKind::NotPiecewiseLinear, "inconsistent ray values");
      f[m] = *u;
    }
    return PiecewiseLinear(fan, f);
  }

  // Indicator-like function: 1 on ray rho, 0 on the other rays.
  static PiecewiseLinear chi(FanPtr fan, int rho) {
    Vec v(fan->num_rays());
    v[rho] = 1;
    return from_ray_values(fan, v);
  }

  const FanPtr& fan() const { return fan_; }
  const std::map<int, Vec>& forms() const { return forms_; }

  // A linear form agreeing with the function on the cone.
  const Vec& form_on(int cone) const {
    for (int m : fan_->maximal_cones())
      if (fan_->is_face(cone, m)) return forms_.at(m);
    fail(ErrorKind::InvalidInput, "cone has no maximal coface");
  }

  Rational value(const Vec& x) const {
    int c = fan_->locate(x);
    require(c >= 0, ErrorKind::InvalidInput, "point outside the support");
    return dot(form_on(c), x);
  }

  Rational ray_value(int r) const { return dot(form_on(fan_->find_cone({r})), fan_->ray(r)); }

  PiecewiseLinear operator+(const PiecewiseLinear& o) const {
    require(o.fan_ == fan_, ErrorKind::DimensionMismatch, "functions on different fans");
    auto f = forms_;
    for (auto& [m, u] : f)
      for (size_t i = 0; i < u.size(); ++i) u[i] += o.forms_.at(m)[i];
    return PiecewiseLinear(fan_, f);
  }
  PiecewiseLinear scaled(const Rational& s) const {
    auto f = forms_;
    for (auto& [m, u] : f)
      for (auto& x : u) x *= s;
    return PiecewiseLinear(fan_, f);
  }
  PiecewiseLinear operator-(const PiecewiseLinear& o) const { return *this + o.scaled(-1); }

  // Pull back along a subdivision whose target is this function's fan.
  PiecewiseLinear pullback(const SubdivisionMap& pi) const {
    require(pi.target.get() == fan_.get() || pi.target == fan_, ErrorKind::DimensionMismatch,
            "pullback along a map to another fan");
    std::map<int, Vec> f;
    for (int m : pi.source->maximal_cones()) f[m] = form_on(pi.assignment[m]);
    return PiecewiseLinear(pi.source, f);
  }

  // Restrict to the fibre fan over a target cone (coordinates of its span).
  PiecewiseLinear restrict_to(const FiberFan& fib) const {
    std::map<int, Vec> f;
    for (int m : fib.fan->maximal_cones()) f[m] = fib.restrict_form(form_on(fib.to_source[m]));
    return PiecewiseLinear(fib.fan, f);
  }

  // Descend to the quotient fan of star(tau) after subtracting a linear form
  // that agrees with the function on tau.
  PiecewiseLinear descend(const QuotientFan& q, int tau) const {
    Vec g = form_on(tau);
    std::map<int, Vec> f;
    for (int m : q.fan->maximal_cones()) {
      Vec u = form_on(q.to_original[m]);
      for (size_t i = 0; i < u.size(); ++i) u[i] -= g[i];
      f[m] = q.descend(u);
    }
    return PiecewiseLinear(q.fan, f);
  }

 private:
  void validate() const {
    int n = fan_->ambient_dim();
    for (int m : fan_->maximal_cones()) {
      require(forms_.count(m) && int(forms_.at(m).size()) == n, ErrorKind::NotPiecewiseLinear,
              "missing or malformed linear form");
      for (int i = 0; i < fan_->lineality_dim(); ++i)
        require(dot(forms_.at(m), fan_->lineality().row(i)) == 0, ErrorKind::NotPiecewiseLinear,
                "function must vanish on the lineality space");
    }
    const auto& mx = fan_->maximal_cones();
    for (size_t a = 0; a < mx.size(); ++a)
      for (size_t b = a + 1; b < mx.size(); ++b) {
        const auto& ra = fan_->cone(mx[a]).rays;
        const auto& rb = fan_->cone(mx[b]).rays;
        std::vector<int> common;
        std::set_intersection(ra.begin(), ra.end(), rb.begin(), rb.end(), std::back_inserter(common));
        for (int r : common)
          require(dot(forms_.at(mx[a]), fan_->ray(r)) == dot(forms_.at(mx[b]), fan_->ray(r)),
                  ErrorKind::NotPiecewiseLinear, "linear pieces disagree on a shared face");
      }
  }

  FanPtr fan_;
  std::map<int, Vec> forms_;
};

struct ConvexityFlags {
  bool convex = true;
  bool strictly_convex = true;
};

namespace detail {

// Wall test across the given walls between top cones (dim d) of the subset.
inline ConvexityFlags wall_test(const PiecewiseLinear& l, const std::vector<int>& walls,
                                const std::function<bool(int)>& in_domain, int d) {
  const Fan& f = *l.fan();
  ConvexityFlags out;
  for (int w : walls) {
    std::vector<int> tops;
    for (int u : f.cone(w).cofacets)
      if (f.cone(u).dim == d && in_domain(u)) tops.push_back(u);
    if (tops.size() != 2) continue;
    int s1 = tops[0], s2 = tops[1];
    int r = -1;
    for (int x : f.cone(s2).rays)
      if (!std::binary_search(f.cone(w).rays.begin(), f.cone(w).rays.end(), x)) r = x;
    const Vec& v = f.ray(r);
    Rational a = dot(l.form_on(s1), v), b = dot(l.form_on(s2), v);
    if (a > b) out.convex = false;
    if (a >= b) out.strictly_convex = false;
  }
  if (!out.convex) out.strictly_convex = false;
  return out;
}

}  // namespace detail

// Convexity across every interior wall of a pure fan (strict: the function
// is not linear across any wall).
inline ConvexityFlags check_convexity(const PiecewiseLinear& l) {
  const Fan& f = *l.fan();
  return detail::wall_test(l, f.interior_walls(), [](int) { return true; }, f.dim());
}

// Strict convexity on every fibre of the subdivision.
inline bool check_relative_convexity(const PiecewiseLinear& lhat, const SubdivisionMap& pi) {
  const Fan& src = *pi.source;
  require(lhat.fan().get() == pi.source.get(), ErrorKind::DimensionMismatch, "function not on the source fan");
  for (int s = 0; s < pi.target->num_cones(); ++s) {
    int d = pi.target->cone(s).dim;
    std::vector<int> walls;
    for (int c : pi.preimage(s))
      if (src.cone(c).dim == d - 1) walls.push_back(c);
    auto flags = detail::wall_test(lhat, walls, [&](int u) { return pi.assignment[u] == s; }, d);
    if (!flags.strictly_convex) return false;
  }
  return true;
}

// Maximal domains of linearity of a convex function on a complete fan: groups
// of maximal cones joined across walls where the function is linear.
struct LinearityDomains {
  std::vector<std::vector<int>> groups;  // maximal cone ids per domain
  int lineality_dim = 0;                 // dimension of the common lineality of the domains
};

inline LinearityDomains linearity_domains(const PiecewiseLinear& l) {
  const Fan& f = *l.fan();
  const auto& mx = f.maximal_cones();
  std::map<int, int> parent;
  for (int m : mx) parent[m] = m;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (int w : f.interior_walls()) {
    std::vector<int> tops;
    for (int u : f.cone(w).cofacets)
      if (f.cone(u).maximal) tops.push_back(u);
    if (tops.size() == 2 && l.form_on(tops[0]) == l.form_on(tops[1])) parent[find(tops[0])] = find(tops[1]);
  }
  LinearityDomains out;
  std::map<int, std::vector<int>> g;
  for (int m : mx) g[find(m)].push_back(m);
  for (auto& [k, v] : g) out.groups.push_back(v);
  // common kernel of differences of the pieces
  int n = f.ambient_dim();
  std::vector<Vec> rows;
  const Vec& u0 = l.form_on(out.groups[0][0]);
  for (const auto& grp : out.groups) {
    Vec d = l.form_on(grp[0]);
    for (int i = 0; i < n; ++i) d[i] -= u0[i];
    rows.push_back(d);
  }
  out.lineality_dim = n - rank(Matrix::from_rows(rows, n));
  return out;
}

inline PiecewiseLinear product_function(FanPtr prod, const Fan& a, const PiecewiseLinear& la,
                                        const Fan& b, const PiecewiseLinear& lb) {
  int na = a.ambient_dim(), nb = b.ambient_dim();
  std::map<int, Vec> forms;
  for (int m : prod->maximal_cones()) {
    std::vector<int> ra, rb;
    for (int r : prod->cone(m).rays) (r < a.num_rays() ? ra : rb).push_back(r < a.num_rays() ? r : r - a.num_rays());
    Vec u(na + nb);
    const Vec& ua = la.form_on(a.find_cone(ra));
    const Vec& ub = lb.form_on(b.find_cone(rb));
    for (int i = 0; i < na; ++i) u[i] = ua[i];
    for (int i = 0; i < nb; ++i) u[na + i] = ub[i];
    forms[m] = u;
  }
  return PiecewiseLinear(prod, forms);
}

}  // namespace fanih
