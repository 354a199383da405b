#pragma once

// Graded vector spaces, graded maps and finitely generated graded modules
// over polynomial rings, all truncated at a degree cap.  Degrees are even:
// linear forms sit in degree 2.

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fanih/linalg.hpp"
#include "fanih/poly.hpp"

namespace fanih {

using GradedDims = std::map<int, int>;  // degree -> dimension (zeros omitted)

inline void check_even(int d) {
  if (d % 2 != 0) fail(ErrorKind::OddDegree, "odd degree " + std::to_string(d));
}

inline GradedDims prune(GradedDims g) {
  for (auto it = g.begin(); it != g.end();) it = it->second == 0 ? g.erase(it) : std::next(it);
  return g;
}

inline std::string format_dims(const GradedDims& g) {
  std::ostringstream os;
  bool first = true;
  for (auto [d, n] : g) {
    if (n == 0) continue;
    os << (first ? "" : " ") << d << ":" << n;
    first = false;
  }
  return first ? "0" : os.str();
}

inline int dim_at(const GradedDims& g, int d) {
  auto it = g.find(d);
  return it == g.end() ? 0 : it->second;
}

// Product of generating functions (convolution of dimension tables).
inline GradedDims convolve(const GradedDims& a, const GradedDims& b) {
  GradedDims c;
  for (auto [d1, n1] : a)
    for (auto [d2, n2] : b) c[d1 + d2] += n1 * n2;
  return prune(c);
}

inline GradedDims shift(const GradedDims& a, int s) {
  GradedDims c;
  for (auto [d, n] : a) c[d + s] = n;
  return c;
}

struct GradedMap {
  int shift = 0;
  std::map<int, Matrix> blocks;  // source degree d -> (dim target_{d+shift}) x (dim source_d)

  const Matrix* at(int d) const {
    auto it = blocks.find(d);
    return it == blocks.end() ? nullptr : &it->second;
  }
};

inline GradedDims graded_rank(const GradedMap& f) {
  GradedDims r;
  for (const auto& [d, m] : f.blocks) r[d] = rank(m);
  return prune(r);
}

inline std::map<int, Matrix> graded_kernel(const GradedMap& f) {
  std::map<int, Matrix> k;
  for (const auto& [d, m] : f.blocks) k[d] = kernel(m);
  return k;
}

inline std::map<int, Matrix> graded_image(const GradedMap& f) {
  std::map<int, Matrix> k;
  for (const auto& [d, m] : f.blocks) k[d + f.shift] = column_space(m);
  return k;
}

inline GradedMap compose(const GradedMap& g, const GradedMap& f) {
  GradedMap h;
  h.shift = f.shift + g.shift;
  for (const auto& [d, m] : f.blocks) {
    auto gm = g.at(d + f.shift);
    if (gm) h.blocks[d] = (*gm) * m;
  }
  return h;
}

// A module over Q[x_1..x_k] truncated at `cap`: a basis per degree and the
// action of each variable as a matrix from degree d to degree d+2.
struct DegreewiseModule {
  int cap = 0;
  int nvars = 0;
  GradedDims dims;
  std::vector<std::map<int, Matrix>> ops;  // ops[i][d]: (dim_{d+2}) x (dim_d)

  Matrix op(int i, int d) const {
    auto it = ops[i].find(d);
    if (it != ops[i].end()) return it->second;
    return Matrix(dim_at(dims, d + 2), dim_at(dims, d));
  }

  // Columns spanning sum_i x_i M^{d-2} inside M^d.
  Matrix decomposables(int d) const {
    Matrix m(dim_at(dims, d), 0);
    for (int i = 0; i < nvars; ++i) m = Matrix::hconcat(m, op(i, d - 2));
    return m;
  }
};

struct Generators {
  GradedDims degrees;
  std::map<int, std::vector<int>> lifts;  // degree -> basis indices chosen as generators
};

// Minimal generators: per degree a complement of the decomposable part,
// spanned by basis vectors at non-pivot positions.
inline Generators minimal_generators(const DegreewiseModule& m) {
  Generators g;
  for (auto [d, n] : m.dims) {
    if (n == 0 || d > m.cap) continue;
    QuotientBasis q = quotient_basis(m.decomposables(d), n);
    if (!q.complement.empty()) {
      g.degrees[d] = int(q.complement.size());
      g.lifts[d] = q.complement;
    }
  }
  return g;
}

// Hilbert series test (truncated at k) that M is free on its minimal
// generators, confirmed constructively: the map from the free module on the
// chosen generators must be bijective in every degree up to k.
inline bool hilbert_check_free(const DegreewiseModule& m, int k) {
  Generators g = minimal_generators(m);
  int v = m.nvars;
  for (int d = 0; d <= k; d += 2) {
    int expect = 0;
    for (auto [gd, gn] : g.degrees)
      if (gd <= d) expect += gn * num_monomials(v, (d - gd) / 2);
    if (expect != dim_at(m.dims, d)) return false;
  }
  // constructive: images of monomial * generator
  for (int d = 0; d <= k; d += 2) {
    std::vector<Vec> cur;
    for (auto [gd, idx] : g.lifts) {
      if (gd > d) continue;
      int e = (d - gd) / 2;
      for (size_t j = 0; j < idx.size(); ++j) {
        const auto& mons = monomials(v, e);
        for (const auto& mon : mons) {
          // build x^mon * g_j by applying operators one variable at a time
          Vec x(dim_at(m.dims, gd));
          x[idx[j]] = 1;
          int deg = gd;
          for (int var = 0; var < v; ++var)
            for (int a = 0; a < mon[var]; ++a) {
              x = m.op(var, deg) * x;
              deg += 2;
            }
          cur.push_back(x);
        }
      }
    }
    int n = dim_at(m.dims, d);
    if (int(cur.size()) != n) return false;
    if (n > 0 && rank(Matrix::from_columns(cur, n)) != n) return false;
  }
  return true;
}

// Plain-text dump, used by fixtures.
inline std::string dump_graded_map(const GradedMap& f) {
  std::ostringstream os;
  os << "shift " << f.shift << "\n";
  for (const auto& [d, m] : f.blocks) os << "degree " << d << "\n" << m.dump();
  return os.str();
}

}  // namespace fanih
