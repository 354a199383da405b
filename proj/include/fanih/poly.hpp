#pragma once

// Dense homogeneous polynomials.  A polynomial of (polynomial) degree e in v
// variables is a Vec indexed by the monomials of degree e in a fixed
// lexicographic order.  All grading elsewhere in the library is doubled
// (linear forms have degree 2); functions here take the undoubled degree.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "fanih/linalg.hpp"

namespace fanih {

using Exponent = std::vector<int>;

namespace detail {

struct MonomialTable {
  std::vector<Exponent> monomials;
  std::map<Exponent, int> index;
  // times_var[k][i] = index (in degree e+1) of monomial k times variable i
  std::vector<std::vector<int>> times_var;
};

inline void enumerate_monomials(int nvars, int deg, int var, Exponent& cur, std::vector<Exponent>& out) {
  if (var == nvars - 1) {
    cur[var] = deg;
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int a = deg; a >= 0; --a) {
    cur[var] = a;
    enumerate_monomials(nvars, deg - a, var + 1, cur, out);
  }
  cur[var] = 0;
}

class MonomialCache {
 public:
  static MonomialCache& instance() {
    static MonomialCache c;
    return c;
  }
  const MonomialTable& get(int nvars, int deg) {
    std::lock_guard<std::mutex> lock(mu_);
    MonomialTable& t = basic_locked(nvars, deg);
    if (t.times_var.empty() && !t.monomials.empty() && nvars > 0) {
      const MonomialTable& up = basic_locked(nvars, deg + 1);
      t.times_var.assign(t.monomials.size(), std::vector<int>(nvars));
      for (size_t k = 0; k < t.monomials.size(); ++k)
        for (int i = 0; i < nvars; ++i) {
          Exponent e = t.monomials[k];
          e[i]++;
          t.times_var[k][i] = up.index.at(e);
        }
    }
    return t;
  }

 private:
  MonomialTable& basic_locked(int nvars, int deg) {
    auto key = std::make_pair(nvars, deg);
    auto it = tables_.find(key);
    if (it != tables_.end()) return *it->second;
    auto t = std::make_unique<MonomialTable>();
    if (deg >= 0) {
      if (nvars == 0) {
        if (deg == 0) t->monomials.push_back({});
      } else {
        Exponent cur(nvars, 0);
        enumerate_monomials(nvars, deg, 0, cur, t->monomials);
      }
    }
    for (size_t k = 0; k < t->monomials.size(); ++k) t->index[t->monomials[k]] = int(k);
    MonomialTable* raw = t.get();
    tables_[key] = std::move(t);
    return *raw;
  }
  std::mutex mu_;
  std::map<std::pair<int, int>, std::unique_ptr<MonomialTable>> tables_;
};

}  // namespace detail

inline const std::vector<Exponent>& monomials(int nvars, int deg) {
  return detail::MonomialCache::instance().get(nvars, deg).monomials;
}

inline int num_monomials(int nvars, int deg) {
  if (deg < 0) return 0;
  if (nvars == 0) return deg == 0 ? 1 : 0;
  // C(deg + nvars - 1, nvars - 1)
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), deg + nvars - 1, nvars - 1);
  return int(c.get_si());
}

inline int monomial_index(int nvars, const Exponent& e) {
  int deg = 0;
  for (int a : e) deg += a;
  return detail::MonomialCache::instance().get(nvars, deg).index.at(e);
}

// Matrix of multiplication by the linear form `form` (nvars coefficients),
// from degree deg to degree deg+1.
inline Matrix multiply_by_linear(int nvars, const Vec& form, int deg) {
  int src = num_monomials(nvars, deg), dst = num_monomials(nvars, deg + 1);
  Matrix m(dst, src);
  if (src == 0 || nvars == 0) return m;
  const auto& t = detail::MonomialCache::instance().get(nvars, deg);
  for (int k = 0; k < src; ++k)
    for (int i = 0; i < nvars; ++i)
      if (form[i] != 0) m(t.times_var[k][i], k) += form[i];
  return m;
}

inline Vec poly_mul(int nvars, int da, const Vec& a, int db, const Vec& b) {
  Vec out(num_monomials(nvars, da + db));
  const auto& ma = monomials(nvars, da);
  const auto& mb = monomials(nvars, db);
  const auto& tab = detail::MonomialCache::instance().get(nvars, da + db);
  Exponent e(nvars);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0) continue;
      for (int v = 0; v < nvars; ++v) e[v] = ma[i][v] + mb[j][v];
      out[tab.index.at(e)] += a[i] * b[j];
    }
  }
  return out;
}

// Matrix (deg-(da+db) coefficients) x (deg-da coefficients) of multiplication by b.
inline Matrix multiply_by_poly(int nvars, int da, int db, const Vec& b) {
  int src = num_monomials(nvars, da);
  Matrix m(num_monomials(nvars, da + db), src);
  for (int k = 0; k < src; ++k) {
    Vec e(src);
    e[k] = 1;
    m.set_col(k, poly_mul(nvars, da, e, db, b));
  }
  return m;
}

// Substitution y_j = sum_i forms(j, i) z_i, from polynomials in y (forms.rows()
// variables) of degree deg to polynomials in z (forms.cols() variables).
inline Matrix linear_substitution(const Matrix& forms, int deg) {
  int ny = forms.rows(), nz = forms.cols();
  const auto& my = monomials(ny, deg);
  Matrix out(num_monomials(nz, deg), int(my.size()));
  if (my.empty()) return out;
  if (deg == 0) {
    if (out.rows() > 0) out(0, 0) = 1;
    return out;
  }
  Matrix prev = linear_substitution(forms, deg - 1);
  std::vector<Matrix> mult(ny);
  for (int j = 0; j < ny; ++j) mult[j] = multiply_by_linear(nz, forms.row(j), deg - 1);
  for (size_t k = 0; k < my.size(); ++k) {
    Exponent e = my[k];
    int j = 0;
    while (e[j] == 0) ++j;
    e[j]--;
    int pk = monomial_index(ny, e);
    Vec pc = prev.col(pk);
    out.set_col(int(k), mult[j] * pc);
  }
  return out;
}

inline Rational poly_eval(int nvars, int deg, const Vec& p, const Vec& point) {
  const auto& ms = monomials(nvars, deg);
  Rational s = 0;
  for (size_t k = 0; k < ms.size(); ++k) {
    if (p[k] == 0) continue;
    Rational t = p[k];
    for (int i = 0; i < nvars; ++i)
      for (int a = 0; a < ms[k][i]; ++a) t *= point[i];
    s += t;
  }
  return s;
}

// Values of all monomials of degree deg at a point.
inline Vec monomial_values(int nvars, int deg, const Vec& point) {
  const auto& ms = monomials(nvars, deg);
  Vec v(ms.size());
  for (size_t k = 0; k < ms.size(); ++k) {
    Rational t = 1;
    for (int i = 0; i < nvars; ++i)
      for (int a = 0; a < ms[k][i]; ++a) t *= point[i];
    v[k] = t;
  }
  return v;
}

// Sparse multivariate polynomials (not necessarily homogeneous), used by the
// exact evaluation path.
using SparsePoly = std::map<Exponent, Rational>;

inline SparsePoly sparse_from_dense(int nvars, int deg, const Vec& p) {
  SparsePoly s;
  const auto& ms = monomials(nvars, deg);
  for (size_t k = 0; k < ms.size(); ++k)
    if (p[k] != 0) s[ms[k]] = p[k];
  return s;
}

inline SparsePoly sparse_mul(const SparsePoly& a, const SparsePoly& b) {
  SparsePoly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exponent e = ea;
      for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      Rational& t = out[e];
      t += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();)
    it = (it->second == 0) ? out.erase(it) : std::next(it);
  return out;
}

inline void sparse_add(SparsePoly& a, const SparsePoly& b, const Rational& scale = 1) {
  for (const auto& [e, c] : b) {
    Rational& t = a[e];
    t += scale * c;
    if (t == 0) a.erase(e);
  }
}

inline SparsePoly sparse_linear(const Vec& form) {
  SparsePoly p;
  for (size_t i = 0; i < form.size(); ++i)
    if (form[i] != 0) {
      Exponent e(form.size(), 0);
      e[i] = 1;
      p[e] = form[i];
    }
  return p;
}

// Exact division by a nonzero linear form; nullopt if it does not divide.
inline std::optional<SparsePoly> sparse_divide_linear(const SparsePoly& p, const Vec& form) {
  int n = int(form.size());
  int lead = -1;
  for (int i = 0; i < n; ++i)
    if (form[i] != 0) {
      lead = i;
      break;
    }
  require(lead >= 0, ErrorKind::InvalidInput, "division by zero form");
  // p = q * form; process terms in decreasing order of the lead exponent.
  SparsePoly rem = p, q;
  while (!rem.empty()) {
    // pick a term with maximal exponent in `lead` (deterministic: lexicographically last)
    auto best = rem.begin();
    for (auto it = rem.begin(); it != rem.end(); ++it)
      if (it->first[lead] > best->first[lead] || (it->first[lead] == best->first[lead] && it->first > best->first))
        best = it;
    if (best->first[lead] == 0) return std::nullopt;
    Exponent e = best->first;
    e[lead]--;
    Rational c = best->second / form[lead];
    q[e] += c;
    SparsePoly term{{e, c}};
    sparse_add(rem, sparse_mul(term, sparse_linear(form)), -1);
  }
  return q;
}

}  // namespace fanih
