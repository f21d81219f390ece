#include "lassopath/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lassopath/errors.hpp"

namespace lassopath {

namespace {

// Jacobi SVD is slower than the divide-and-conquer variant but deterministic and
// accurate on the small, possibly rank-deficient blocks we factor.
using Svd = Eigen::JacobiSVD<Matrix>;

Index rank_from_singular_values(const Vector& sigma, double rank_tol) {
  if (sigma.size() == 0) return 0;
  const double cutoff = rank_tol * sigma(0);
  Index r = 0;
  while (r < sigma.size() && sigma(r) > cutoff && sigma(r) > 0.0) ++r;
  return r;
}

}  // namespace

Matrix make_matrix(Index rows, Index cols, std::span<const double> row_major) {
  if (rows < 0 || cols < 0) throw DimensionError("matrix dimensions must be nonnegative");
  if (static_cast<Index>(row_major.size()) != rows * cols) {
    throw DimensionError("matrix entry count " + std::to_string(row_major.size()) +
                         " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double v = row_major[static_cast<std::size_t>(i * cols + j)];
      if (!std::isfinite(v)) throw DimensionError("matrix entries must be finite");
      m(i, j) = v;
    }
  }
  return m;
}

Matrix make_matrix(Index rows, Index cols, std::initializer_list<double> row_major) {
  return make_matrix(rows, cols, std::span<const double>(row_major.begin(), row_major.size()));
}

Vector make_vector(std::span<const double> entries) {
  Vector v(static_cast<Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!std::isfinite(entries[i])) throw DimensionError("vector entries must be finite");
    v(static_cast<Index>(i)) = entries[i];
  }
  return v;
}

Vector make_vector(std::initializer_list<double> entries) {
  return make_vector(std::span<const double>(entries.begin(), entries.size()));
}

bool all_finite(const Matrix& m) { return m.allFinite(); }
bool all_finite(const Vector& v) { return v.allFinite(); }

// IndexSet

IndexSet::IndexSet(std::vector<Index> sorted) : idx_(std::move(sorted)) {
  for (std::size_t k = 0; k < idx_.size(); ++k) {
    if (idx_[k] < 0) throw DimensionError("index sets hold nonnegative indices");
    if (k > 0 && idx_[k] <= idx_[k - 1]) {
      throw DimensionError("index set must be strictly increasing");
    }
  }
}

IndexSet::IndexSet(std::initializer_list<Index> sorted) : IndexSet(std::vector<Index>(sorted)) {}

IndexSet IndexSet::from_unsorted(std::vector<Index> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return IndexSet(std::move(indices));
}

IndexSet IndexSet::all(Index n) {
  std::vector<Index> v(static_cast<std::size_t>(std::max<Index>(n, 0)));
  for (Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return IndexSet(std::move(v));
}

bool IndexSet::contains(Index i) const noexcept {
  return std::binary_search(idx_.begin(), idx_.end(), i);
}

Index IndexSet::position(Index i) const noexcept {
  auto it = std::lower_bound(idx_.begin(), idx_.end(), i);
  if (it == idx_.end() || *it != i) return -1;
  return static_cast<Index>(it - idx_.begin());
}

void IndexSet::check_bound(Index n) const {
  if (!idx_.empty() && idx_.back() >= n) {
    throw DimensionError("index " + std::to_string(idx_.back()) + " out of range for " +
                         std::to_string(n) + " columns");
  }
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  std::vector<Index> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IndexSet(std::move(out));
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  std::vector<Index> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IndexSet(std::move(out));
}

IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  std::vector<Index> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IndexSet(std::move(out));
}

IndexSet complement(const IndexSet& s, Index n) { return set_difference(IndexSet::all(n), s); }

IndexSet support(const Vector& v, double threshold) {
  std::vector<Index> out;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > threshold) out.push_back(i);
  }
  return IndexSet(std::move(out));
}

// Column blocks

Matrix columns(const Matrix& A, const IndexSet& S) {
  S.check_bound(A.cols());
  Matrix out(A.rows(), S.size());
  for (Index j = 0; j < S.size(); ++j) out.col(j) = A.col(S[j]);
  return out;
}

Matrix gram(const Matrix& A, const IndexSet& S, const IndexSet& T) {
  S.check_bound(A.cols());
  T.check_bound(A.cols());
  Matrix out(S.size(), T.size());
  for (Index i = 0; i < S.size(); ++i) {
    for (Index j = 0; j < T.size(); ++j) out(i, j) = A.col(S[i]).dot(A.col(T[j]));
  }
  return out;
}

Vector gather(const Vector& v, const IndexSet& S) {
  S.check_bound(v.size());
  Vector out(S.size());
  for (Index k = 0; k < S.size(); ++k) out(k) = v(S[k]);
  return out;
}

Vector scatter(const Vector& values, const IndexSet& S, Index n) {
  if (values.size() != S.size()) throw DimensionError("scatter: value count differs from set size");
  S.check_bound(n);
  Vector out = Vector::Zero(n);
  for (Index k = 0; k < S.size(); ++k) out(S[k]) = values(k);
  return out;
}

// Factorizations

Vector least_squares_min_norm(const Matrix& G, const Vector& b, double rank_tol) {
  if (b.size() != G.rows()) {
    throw DimensionError("least squares: rhs has " + std::to_string(b.size()) + " entries, matrix has " +
                         std::to_string(G.rows()) + " rows");
  }
  if (G.cols() == 0) return Vector(0);
  if (G.rows() == 0) return Vector::Zero(G.cols());

  Svd svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const Index r = rank_from_singular_values(sigma, rank_tol);
  if (r == 0) return Vector::Zero(G.cols());

  Vector coeff = svd.matrixU().leftCols(r).transpose() * b;
  coeff.array() /= sigma.head(r).array();
  return svd.matrixV().leftCols(r) * coeff;
}

Index numerical_rank(const Matrix& G, double rank_tol) {
  if (G.rows() == 0 || G.cols() == 0) return 0;
  Svd svd(G);
  return rank_from_singular_values(svd.singularValues(), rank_tol);
}

Matrix range_basis(const Matrix& G, double rank_tol) {
  if (G.rows() == 0 || G.cols() == 0) return Matrix(G.rows(), 0);
  Svd svd(G, Eigen::ComputeThinU);
  const Index r = rank_from_singular_values(svd.singularValues(), rank_tol);
  return svd.matrixU().leftCols(r);
}

Matrix null_space_basis(const Matrix& G, double rank_tol) {
  const Index n = G.cols();
  if (n == 0) return Matrix(0, 0);
  if (G.rows() == 0) return Matrix::Identity(n, n);
  Svd svd(G, Eigen::ComputeFullV);
  const Index r = rank_from_singular_values(svd.singularValues(), rank_tol);
  return svd.matrixV().rightCols(n - r);
}

}  // namespace lassopath
