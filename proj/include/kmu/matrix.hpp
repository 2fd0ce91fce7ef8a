#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kmu/errors.hpp"
#include "kmu/scalar.hpp"

namespace kmu {

template <typename S>
using Vec = std::vector<S>;

// Dense matrix over the scalar field; all algorithms below are plain Gaussian
// elimination with exact (or tolerance-based, for the float backend) zero
// tests. Sizes here are tiny: frames are (2n+1)-dimensional.
template <typename S>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols, S(0)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = S(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  S& at(int i, int j) { return a_[i * cols_ + j]; }
  const S& at(int i, int j) const { return a_[i * cols_ + j]; }

  bool is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const S& x) { return x.is_zero(); });
  }

  bool is_symmetric() const {
    for (int i = 0; i < rows_; ++i)
      for (int j = i + 1; j < cols_; ++j)
        if (at(i, j) != at(j, i)) return false;
    return rows_ == cols_;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    Matrix r(x.rows_, x.cols_);
    for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] + y.a_[k];
    return r;
  }
  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    Matrix r(x.rows_, x.cols_);
    for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] - y.a_[k];
    return r;
  }
  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    Matrix r(x.rows_, y.cols_);
    for (int i = 0; i < x.rows_; ++i)
      for (int k = 0; k < x.cols_; ++k) {
        const S& xik = x.at(i, k);
        if (xik.is_zero()) continue;
        for (int j = 0; j < y.cols_; ++j) r.at(i, j) += xik * y.at(k, j);
      }
    return r;
  }
  friend Matrix operator*(const S& c, const Matrix& x) {
    Matrix r(x.rows_, x.cols_);
    for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = c * x.a_[k];
    return r;
  }
  Matrix operator-() const { return S(-1) * *this; }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_) return false;
    for (size_t k = 0; k < x.a_.size(); ++k)
      if (x.a_[k] != y.a_[k]) return false;
    return true;
  }
  friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }

 private:
  int rows_, cols_;
  std::vector<S> a_;
};

// --- vector helpers -------------------------------------------------------

template <typename S>
Vec<S> zero_vec(int n) {
  return Vec<S>(n, S(0));
}

template <typename S>
bool vec_is_zero(const Vec<S>& v) {
  return std::all_of(v.begin(), v.end(), [](const S& x) { return x.is_zero(); });
}

template <typename S>
Vec<S> vadd(const Vec<S>& x, const Vec<S>& y) {
  Vec<S> r(x.size());
  for (size_t k = 0; k < x.size(); ++k) r[k] = x[k] + y[k];
  return r;
}

template <typename S>
Vec<S> vsub(const Vec<S>& x, const Vec<S>& y) {
  Vec<S> r(x.size());
  for (size_t k = 0; k < x.size(); ++k) r[k] = x[k] - y[k];
  return r;
}

template <typename S>
Vec<S> vscale(const S& c, const Vec<S>& x) {
  Vec<S> r(x.size());
  for (size_t k = 0; k < x.size(); ++k) r[k] = c * x[k];
  return r;
}

template <typename S>
bool vec_equal(const Vec<S>& x, const Vec<S>& y) {
  if (x.size() != y.size()) return false;
  for (size_t k = 0; k < x.size(); ++k)
    if (x[k] != y[k]) return false;
  return true;
}

template <typename S>
Vec<S> mat_vec(const Matrix<S>& m, const Vec<S>& v) {
  Vec<S> r(m.rows(), S(0));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r[i] += m.at(i, j) * v[j];
  return r;
}

// u^T G v
template <typename S>
S form_eval(const Matrix<S>& g, const Vec<S>& u, const Vec<S>& v) {
  S acc(0);
  for (int i = 0; i < g.rows(); ++i) {
    if (u[i].is_zero()) continue;
    for (int j = 0; j < g.cols(); ++j) acc += u[i] * g.at(i, j) * v[j];
  }
  return acc;
}

template <typename S>
Matrix<S> columns_to_matrix(const std::vector<Vec<S>>& cols, int rows) {
  Matrix<S> m(rows, static_cast<int>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < rows; ++i) m.at(i, static_cast<int>(j)) = cols[j][i];
  return m;
}

// --- elimination ----------------------------------------------------------

namespace detail {

// Row echelon reduction in place; returns pivot columns. Pivot choice: the
// nonzero entry of largest double magnitude (harmless for exact scalars,
// stabilizing for the float backend).
template <typename S>
std::vector<int> row_reduce(Matrix<S>& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int best = -1;
    double best_mag = 0.0;
    for (int i = row; i < m.rows(); ++i) {
      if (m.at(i, col).is_zero()) continue;
      double mag = std::fabs(m.at(i, col).to_double());
      if (best < 0 || mag > best_mag) {
        best = i;
        best_mag = mag;
      }
    }
    if (best < 0) continue;
    if (best != row)
      for (int j = 0; j < m.cols(); ++j) std::swap(m.at(row, j), m.at(best, j));
    S inv = m.at(row, col).inverse();
    for (int j = col; j < m.cols(); ++j) m.at(row, j) = inv * m.at(row, j);
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || m.at(i, col).is_zero()) continue;
      S f = m.at(i, col);
      for (int j = col; j < m.cols(); ++j) m.at(i, j) = m.at(i, j) - f * m.at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace detail

template <typename S>
int rank(Matrix<S> m) {
  return static_cast<int>(detail::row_reduce(m).size());
}

struct SolveStats {
  int rank = 0;
  int nullity = 0;
};

// Exact solve of A X = B for square or overdetermined consistent systems.
// Uniqueness is required: rank(A) must equal cols(A) (SingularSystem
// otherwise) and the reduction must leave no inconsistent row
// (InconsistentSystem). `stats`, when given, receives rank/nullity.
template <typename S>
Matrix<S> solve_linear(const Matrix<S>& a, const Matrix<S>& b, SolveStats* stats = nullptr) {
  if (a.rows() != b.rows()) fail(ErrorKind::SingularSystem, "dimension mismatch");
  if (a.rows() < a.cols()) fail(ErrorKind::SingularSystem, "underdetermined system");
  Matrix<S> aug(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols(); ++j) aug.at(i, a.cols() + j) = b.at(i, j);
  }
  std::vector<int> pivots = detail::row_reduce(aug);
  int r = 0;
  for (int p : pivots)
    if (p < a.cols()) ++r;
  if (stats) {
    stats->rank = r;
    stats->nullity = a.cols() - r;
  }
  for (int p : pivots)
    if (p >= a.cols()) fail(ErrorKind::InconsistentSystem, "residual is nonzero");
  if (r < a.cols()) fail(ErrorKind::SingularSystem, "rank " + std::to_string(r) + " < " +
                                                        std::to_string(a.cols()) + " unknowns");
  Matrix<S> x(a.cols(), b.cols());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < b.cols(); ++j) x.at(pivots[i], j) = aug.at(i, a.cols() + j);
  return x;
}

template <typename S>
Vec<S> solve_vec(const Matrix<S>& a, const Vec<S>& b) {
  Matrix<S> bm(static_cast<int>(b.size()), 1);
  for (size_t i = 0; i < b.size(); ++i) bm.at(static_cast<int>(i), 0) = b[i];
  Matrix<S> x = solve_linear(a, bm);
  Vec<S> r(a.cols());
  for (int i = 0; i < a.cols(); ++i) r[i] = x.at(i, 0);
  return r;
}

template <typename S>
std::vector<Vec<S>> nullspace(Matrix<S> m) {
  int n = m.cols();
  std::vector<int> pivots = detail::row_reduce(m);
  std::vector<bool> is_pivot(n, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<Vec<S>> basis;
  for (int free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Vec<S> v(n, S(0));
    v[free] = S(1);
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(static_cast<int>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <typename S>
S det(Matrix<S> m) {
  if (m.rows() != m.cols()) fail(ErrorKind::SingularSystem, "det of non-square matrix");
  int n = m.rows();
  S d(1);
  for (int col = 0; col < n; ++col) {
    int best = -1;
    double best_mag = 0.0;
    for (int i = col; i < n; ++i) {
      if (m.at(i, col).is_zero()) continue;
      double mag = std::fabs(m.at(i, col).to_double());
      if (best < 0 || mag > best_mag) {
        best = i;
        best_mag = mag;
      }
    }
    if (best < 0) return S(0);
    if (best != col) {
      for (int j = 0; j < n; ++j) std::swap(m.at(col, j), m.at(best, j));
      d = -d;
    }
    d *= m.at(col, col);
    S inv = m.at(col, col).inverse();
    for (int i = col + 1; i < n; ++i) {
      if (m.at(i, col).is_zero()) continue;
      S f = inv * m.at(i, col);
      for (int j = col; j < n; ++j) m.at(i, j) = m.at(i, j) - f * m.at(col, j);
    }
  }
  return d;
}

template <typename S>
Matrix<S> inverse(const Matrix<S>& m) {
  return solve_linear(m, Matrix<S>::identity(m.rows()));
}

// Characteristic polynomial coefficients c[0..n] with p(x) = sum c[k] x^k,
// monic, via the Faddeev-LeVerrier recursion (division only by integers).
template <typename S>
std::vector<S> char_poly(const Matrix<S>& a) {
  int n = a.rows();
  std::vector<S> c(n + 1, S(0));
  c[n] = S(1);
  Matrix<S> m = Matrix<S>::identity(n);
  for (int k = 1; k <= n; ++k) {
    m = a * m;
    S tr(0);
    for (int i = 0; i < n; ++i) tr += m.at(i, i);
    c[n - k] = -(tr / S(k));
    for (int i = 0; i < n; ++i) m.at(i, i) += c[n - k];
  }
  return c;
}

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

// Eigenvalue sign counts of a symmetric matrix: all roots of the
// characteristic polynomial are real, so Descartes' rule is exact.
template <typename S>
Signature symmetric_signature(const Matrix<S>& a) {
  std::vector<S> c = char_poly(a);
  int n = a.rows();
  int zero = 0;
  while (zero <= n && c[zero].is_zero()) ++zero;
  auto variations = [&](bool flip) {
    int var = 0, prev = 0;
    for (int k = zero; k <= n; ++k) {
      int s = c[k].sign();
      if (flip && (k % 2 == 1)) s = -s;
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++var;
      prev = s;
    }
    return var;
  };
  Signature sig;
  sig.zero = zero;
  sig.positive = variations(false);
  sig.negative = variations(true);
  return sig;
}

}  // namespace kmu
