#pragma once

// Exact rational linear algebra: dense matrices for small blocks and a sparse
// row-echelon eliminator for the big section systems.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fanih/errors.hpp"

namespace fanih {

using Rational = mpq_class;
using Vec = std::vector<Rational>;

inline Rational parse_rational(const std::string& s) {
  std::string t;
  for (char c : s)
    if (c != ' ') t += c;
  if (t.empty()) fail(ErrorKind::InvalidInput, "empty rational");
  if (t[0] == '+') t.erase(0, 1);
  size_t slash = t.find('/');
  auto digits = [](const std::string& u, bool sign_ok) {
    if (u.empty()) return false;
    size_t i = (sign_ok && u[0] == '-') ? 1 : 0;
    if (i == u.size()) return false;
    for (; i < u.size(); ++i)
      if (u[i] < '0' || u[i] > '9') return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!digits(t, true)) fail(ErrorKind::InvalidInput, "bad rational '" + s + "'");
    return Rational(mpz_class(t));
  }
  std::string num = t.substr(0, slash), den = t.substr(slash + 1);
  if (!digits(num, true) || !digits(den, false))
    fail(ErrorKind::InvalidInput, "bad rational '" + s + "'");
  mpz_class d(den);
  if (d == 0) fail(ErrorKind::InvalidInput, "zero denominator in '" + s + "'");
  Rational q(mpz_class(num), d);
  q.canonicalize();
  return q;
}

inline std::string format_rational(const Rational& q) { return q.get_str(); }

inline bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline Rational dot(const Vec& a, const Vec& b) {
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

// Scale to a primitive integer vector with the first nonzero entry positive.
inline Vec normalize_direction(Vec v, bool fix_sign = true) {
  mpz_class l = 1, g = 0;
  for (auto& x : v)
    if (x != 0) l = lcm(l, x.get_den());
  for (auto& x : v) {
    x *= l;
    if (x != 0) g = gcd(g, x.get_num());
  }
  if (g == 0) return v;
  int s = 1;
  if (fix_sign)
    for (auto& x : v)
      if (x != 0) {
        s = sgn(x);
        break;
      }
  for (auto& x : v) x = x / g * s;
  return v;
}

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Matrix from_rows(const std::vector<Vec>& rows, int cols) {
    Matrix m(int(rows.size()), cols);
    for (int i = 0; i < m.rows_; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    return m;
  }
  static Matrix from_columns(const std::vector<Vec>& cols, int rows) {
    Matrix m(rows, int(cols.size()));
    for (int j = 0; j < m.cols_; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int i, int j) { return data_[size_t(i) * cols_ + j]; }
  const Rational& operator()(int i, int j) const { return data_[size_t(i) * cols_ + j]; }

  Vec row(int i) const { return Vec(data_.begin() + size_t(i) * cols_, data_.begin() + size_t(i + 1) * cols_); }
  Vec col(int j) const {
    Vec v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_col(int j, const Vec& v) {
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    require(cols_ == o.rows_, ErrorKind::DimensionMismatch, "matrix product shape");
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Rational& a = (*this)(i, k);
        if (a == 0) continue;
        for (int j = 0; j < o.cols_; ++j)
          if (o(k, j) != 0) r(i, j) += a * o(k, j);
      }
    return r;
  }
  Vec operator*(const Vec& v) const {
    Vec r(rows_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k)
        if (v[k] != 0 && (*this)(i, k) != 0) r[i] += (*this)(i, k) * v[k];
    return r;
  }
  Matrix operator+(const Matrix& o) const {
    Matrix r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    Matrix r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
    return r;
  }
  Matrix scaled(const Rational& s) const {
    Matrix r = *this;
    for (auto& x : r.data_) x *= s;
    return r;
  }
  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const auto& x : data_)
      if (x != 0) return false;
    return true;
  }

  // Rows [r0, r0+nr) and columns [c0, c0+nc).
  Matrix block(int r0, int c0, int nr, int nc) const {
    Matrix b(nr, nc);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }
  Matrix select_columns(const std::vector<int>& cs) const {
    Matrix b(rows_, int(cs.size()));
    for (int i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cs.size(); ++j) b(i, int(j)) = (*this)(i, cs[j]);
    return b;
  }
  Matrix select_rows(const std::vector<int>& rs) const {
    Matrix b(int(rs.size()), cols_);
    for (size_t i = 0; i < rs.size(); ++i)
      for (int j = 0; j < cols_; ++j) b(int(i), j) = (*this)(rs[i], j);
    return b;
  }
  static Matrix hconcat(const Matrix& a, const Matrix& b) {
    int r = std::max(a.rows_, b.rows_);
    Matrix m(r, a.cols_ + b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
    for (int i = 0; i < b.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) m(i, a.cols_ + j) = b(i, j);
    return m;
  }
  static Matrix vconcat(const Matrix& a, const Matrix& b) {
    int c = std::max(a.cols_, b.cols_);
    Matrix m(a.rows_ + b.rows_, c);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
    for (int i = 0; i < b.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) m(a.rows_ + i, j) = b(i, j);
    return m;
  }

  // Plain-text dump: header "rows cols" then one row per line.
  std::string dump() const {
    std::ostringstream os;
    os << rows_ << " " << cols_ << "\n";
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
      os << "\n";
    }
    return os.str();
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

struct Echelon {
  Matrix reduced;           // reduced row echelon form, zero rows dropped
  std::vector<int> pivots;  // pivot column per row
};

inline Echelon rref(Matrix m) {
  int r = 0;
  std::vector<int> piv;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int p = -1;
    for (int i = r; i < m.rows(); ++i)
      if (m(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (int j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (int j = c; j < m.cols(); ++j)
        if (m(r, j) != 0) m(i, j) -= f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  return {m.block(0, 0, r, m.cols()), piv};
}

inline int rank(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return int(rref(m).pivots.size());
}

// Basis of the right kernel as columns; column k has a 1 in the k-th free
// position and 0 in the other free positions.
inline Matrix kernel(const Matrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_piv(m.cols(), false);
  for (int p : e.pivots) is_piv[p] = true;
  std::vector<int> free;
  for (int j = 0; j < m.cols(); ++j)
    if (!is_piv[j]) free.push_back(j);
  Matrix k(m.cols(), int(free.size()));
  for (size_t f = 0; f < free.size(); ++f) {
    k(free[f], int(f)) = 1;
    for (size_t i = 0; i < e.pivots.size(); ++i) k(e.pivots[i], int(f)) = -e.reduced(int(i), free[f]);
  }
  return k;
}

// Indices of a maximal independent set of columns (leftmost choice).
inline std::vector<int> independent_columns(const Matrix& m) {
  if (m.rows() == 0) return {};
  return rref(m).pivots;
}

inline Matrix column_space(const Matrix& m) { return m.select_columns(independent_columns(m)); }

// Some solution of A x = b (free variables set to zero), if any.
inline std::optional<Vec> solve(const Matrix& a, const Vec& b) {
  Matrix aug(a.rows(), a.cols() + 1);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  Echelon e = rref(aug);
  Vec x(a.cols());
  for (size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == a.cols()) return std::nullopt;
    x[e.pivots[i]] = e.reduced(int(i), a.cols());
  }
  return x;
}

// Solve A X = B column by column; nullopt if some column is inconsistent.
inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  Matrix aug = Matrix::hconcat(a, b);
  Echelon e = rref(aug);
  Matrix x(a.cols(), b.cols());
  for (size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] >= a.cols()) return std::nullopt;
    for (int j = 0; j < b.cols(); ++j) x(e.pivots[i], j) = e.reduced(int(i), a.cols() + j);
  }
  return x;
}

inline Matrix inverse(const Matrix& a) {
  require(a.rows() == a.cols(), ErrorKind::DimensionMismatch, "inverse of non-square matrix");
  auto x = solve(a, Matrix::identity(a.rows()));  // AX = I solvable iff a is invertible
  require(x.has_value(), ErrorKind::DegenerateRestriction, "singular matrix");
  return *x;
}

inline Rational determinant(Matrix m) {
  require(m.rows() == m.cols(), ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  Rational det = 1;
  int n = m.rows();
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (m(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) return 0;
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) / m(c, c);
      for (int j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

// Complement of the column span of U inside Q^n spanned by unit vectors, plus
// the data to reduce any vector modulo span(U) onto that complement.
struct QuotientBasis {
  int ambient = 0;
  std::vector<int> complement;  // coordinates e_j spanning a complement
  Echelon image;                // rref of U^T
  // coordinates of v mod span(U) in the complement basis
  Vec reduce(const Vec& v) const {
    Vec w = v;
    for (size_t i = 0; i < image.pivots.size(); ++i) {
      int p = image.pivots[i];
      if (w[p] == 0) continue;
      Rational f = w[p];
      for (int j = 0; j < ambient; ++j)
        if (image.reduced(int(i), j) != 0) w[j] -= f * image.reduced(int(i), j);
    }
    Vec out(complement.size());
    for (size_t k = 0; k < complement.size(); ++k) out[k] = w[complement[k]];
    return out;
  }
};

inline QuotientBasis quotient_basis(const Matrix& spanning_columns, int ambient) {
  QuotientBasis q;
  q.ambient = ambient;
  if (spanning_columns.cols() > 0 && ambient > 0) q.image = rref(spanning_columns.transpose());
  std::vector<bool> piv(ambient, false);
  for (int p : q.image.pivots) piv[p] = true;
  for (int j = 0; j < ambient; ++j)
    if (!piv[j]) q.complement.push_back(j);
  return q;
}

// ---------------------------------------------------------------- sparse

using SparseVec = std::vector<std::pair<int, Rational>>;  // sorted by index

inline SparseVec to_sparse(const Vec& v, int offset = 0) {
  SparseVec s;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) s.emplace_back(int(i) + offset, v[i]);
  return s;
}

inline Vec to_dense(const SparseVec& s, int n) {
  Vec v(n);
  for (const auto& [i, x] : s) v[i] = x;
  return v;
}

inline Rational sparse_get(const SparseVec& s, int i) {
  auto it = std::lower_bound(s.begin(), s.end(), i, [](const auto& e, int k) { return e.first < k; });
  return (it != s.end() && it->first == i) ? it->second : Rational(0);
}

// Sparse Gaussian elimination over Q producing the kernel of the row system in
// reduced form.  Rows are inserted one at a time and kept in echelon form with
// respect to their leftmost entry; back substitution happens on demand.
class SparseEliminator {
 public:
  explicit SparseEliminator(int ncols) : ncols_(ncols), pivot_row_(ncols, -1) {}

  int cols() const { return ncols_; }
  int rank() const { return int(rows_.size()); }

  // Returns true when the row was independent of the previous ones.
  bool add_row(const SparseVec& row) {
    std::map<int, Rational> acc;
    for (const auto& [j, x] : row)
      if (x != 0) acc[j] += x;
    while (!acc.empty()) {
      auto it = acc.begin();
      if (it->second == 0) {
        acc.erase(it);
        continue;
      }
      int c = it->first;
      int pr = pivot_row_[c];
      if (pr < 0) break;
      Rational f = it->second;
      for (const auto& [j, x] : rows_[pr]) {
        Rational& t = acc[j];
        t -= f * x;
        if (t == 0) acc.erase(j);
      }
    }
    if (acc.empty()) return false;
    int c = acc.begin()->first;
    Rational inv = 1 / acc.begin()->second;
    SparseVec r;
    r.reserve(acc.size());
    for (auto& [j, x] : acc)
      if (x != 0) r.emplace_back(j, x * inv);
    pivot_row_[c] = int(rows_.size());
    rows_.push_back(std::move(r));
    reduced_ = false;
    return true;
  }

  // Reduce every pivot row so it has no entries in other pivot columns.
  void back_substitute() {
    if (reduced_) return;
    std::vector<int> order;
    for (int c = ncols_ - 1; c >= 0; --c)
      if (pivot_row_[c] >= 0) order.push_back(c);
    for (int c : order) {
      SparseVec& r = rows_[pivot_row_[c]];
      bool dirty = false;
      for (const auto& [j, x] : r)
        if (j != c && pivot_row_[j] >= 0) {
          dirty = true;
          break;
        }
      if (!dirty) continue;
      std::map<int, Rational> acc(r.begin(), r.end());
      // pivot columns to the right are already reduced; eliminate them
      std::vector<std::pair<int, Rational>> hits;
      for (const auto& [j, x] : r)
        if (j != c && pivot_row_[j] >= 0) hits.emplace_back(j, x);
      for (const auto& [j, f] : hits) {
        for (const auto& [k, y] : rows_[pivot_row_[j]]) {
          Rational& t = acc[k];
          t -= f * y;
        }
      }
      SparseVec nr;
      for (auto& [k, x] : acc)
        if (x != 0) nr.emplace_back(k, x);
      r = std::move(nr);
    }
    reduced_ = true;
  }

  std::vector<int> pivot_columns() const {
    std::vector<int> p;
    for (int c = 0; c < ncols_; ++c)
      if (pivot_row_[c] >= 0) p.push_back(c);
    return p;
  }

  struct Kernel {
    std::vector<int> free_cols;    // basis[k] has 1 at free_cols[k], 0 at other free columns
    std::vector<SparseVec> basis;
  };

  Kernel kernel() {
    back_substitute();
    Kernel k;
    std::vector<int> free_index(ncols_, -1);
    for (int c = 0; c < ncols_; ++c)
      if (pivot_row_[c] < 0) {
        free_index[c] = int(k.free_cols.size());
        k.free_cols.push_back(c);
      }
    std::vector<std::vector<std::pair<int, Rational>>> cols(k.free_cols.size());
    for (int c = 0; c < ncols_; ++c) {
      if (pivot_row_[c] < 0) continue;
      for (const auto& [j, x] : rows_[pivot_row_[c]])
        if (j != c) cols[free_index[j]].emplace_back(c, -x);
    }
    k.basis.resize(k.free_cols.size());
    for (size_t f = 0; f < k.free_cols.size(); ++f) {
      auto& v = cols[f];
      v.emplace_back(k.free_cols[f], Rational(1));
      std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      k.basis[f] = std::move(v);
    }
    return k;
  }

  // Reduce v against the row space; returns the remainder (zero iff v in span).
  SparseVec reduce(const SparseVec& v) const {
    std::map<int, Rational> acc;
    for (const auto& [j, x] : v)
      if (x != 0) acc[j] += x;
    std::map<int, Rational> out;
    while (!acc.empty()) {
      auto it = acc.begin();
      int c = it->first;
      Rational f = it->second;
      acc.erase(it);
      if (f == 0) continue;
      int pr = pivot_row_[c];
      if (pr < 0) {
        out[c] = f;
        continue;
      }
      for (const auto& [j, x] : rows_[pr]) {
        if (j == c) continue;
        Rational& t = acc[j];
        t -= f * x;
      }
    }
    SparseVec r;
    for (auto& [j, x] : out)
      if (x != 0) r.emplace_back(j, x);
    return r;
  }

 private:
  int ncols_;
  std::vector<int> pivot_row_;
  std::vector<SparseVec> rows_;
  bool reduced_ = true;
};

// ---------------------------------------------------------------- forms

struct Inertia {
  int positive = 0, negative = 0, zero = 0;
  bool operator==(const Inertia& o) const {
    return positive == o.positive && negative == o.negative && zero == o.zero;
  }
  int signature() const { return positive - negative; }
};

inline bool is_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

// Inertia by exact congruence diagonalisation.
inline Inertia inertia(Matrix m) {
  require(is_symmetric(m), ErrorKind::NotSymmetric, "form is not symmetric");
  int n = m.rows();
  Inertia in;
  std::vector<bool> done(n, false);
  for (int step = 0; step < n; ++step) {
    int p = -1;
    for (int i = 0; i < n && p < 0; ++i)
      if (!done[i] && m(i, i) != 0) p = i;
    if (p < 0) {
      // all remaining diagonal entries vanish; use an off-diagonal entry
      int a = -1, b = -1;
      for (int i = 0; i < n && a < 0; ++i)
        for (int j = i + 1; j < n; ++j)
          if (!done[i] && !done[j] && m(i, j) != 0) {
            a = i;
            b = j;
            break;
          }
      if (a < 0) break;
      // row/col a += row/col b  makes m(a,a) = 2 m(a,b) != 0
      for (int j = 0; j < n; ++j) m(a, j) += m(b, j);
      for (int i = 0; i < n; ++i) m(i, a) += m(i, b);
      p = a;
    }
    Rational d = m(p, p);
    (d > 0 ? in.positive : in.negative)++;
    done[p] = true;
    // Schur complement on the remaining block
    for (int i = 0; i < n; ++i) {
      if (done[i] || m(i, p) == 0) continue;
      Rational f = m(i, p) / d;
      for (int j = 0; j < n; ++j)
        if (!done[j] && m(p, j) != 0) m(i, j) -= f * m(p, j);
    }
    for (int i = 0; i < n; ++i) m(i, p) = m(p, i) = 0;
  }
  in.zero = n - in.positive - in.negative;
  return in;
}

}  // namespace fanih
