#pragma once

// Dense real linear algebra used by the path solvers. Matrices and vectors are
// plain Eigen types; the helpers here add the column-subset views, Gram blocks,
// and rank-revealing minimal-norm solves the homotopy code is written in terms of.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lassopath {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultRankTol = 1e-12;

/// Builds a rows x cols matrix from row-major entries. Throws DimensionError on a
/// count mismatch or on non-finite entries.
Matrix make_matrix(Index rows, Index cols, std::span<const double> row_major);
Matrix make_matrix(Index rows, Index cols, std::initializer_list<double> row_major);

/// Builds a vector, rejecting non-finite entries.
Vector make_vector(std::span<const double> entries);
Vector make_vector(std::initializer_list<double> entries);

bool all_finite(const Matrix& m);
bool all_finite(const Vector& v);

/// Sorted set of distinct column indices.
class IndexSet {
 public:
  using const_iterator = std::vector<Index>::const_iterator;

  IndexSet() = default;
  /// Takes indices that must already be strictly increasing and nonnegative.
  explicit IndexSet(std::vector<Index> sorted);
  IndexSet(std::initializer_list<Index> sorted);

  /// Sorts and deduplicates.
  static IndexSet from_unsorted(std::vector<Index> indices);
  /// {0, 1, ..., n-1}
  static IndexSet all(Index n);

  Index size() const noexcept { return static_cast<Index>(idx_.size()); }
  bool empty() const noexcept { return idx_.empty(); }
  bool contains(Index i) const noexcept;
  /// Position of i in the set, or -1.
  Index position(Index i) const noexcept;
  Index operator[](Index k) const { return idx_[static_cast<std::size_t>(k)]; }
  const_iterator begin() const noexcept { return idx_.begin(); }
  const_iterator end() const noexcept { return idx_.end(); }
  const std::vector<Index>& indices() const noexcept { return idx_; }

  /// Throws DimensionError if any index is >= n.
  void check_bound(Index n) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<Index> idx_;
};

IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);
IndexSet set_intersection(const IndexSet& a, const IndexSet& b);
/// [0, n) \ s
IndexSet complement(const IndexSet& s, Index n);
/// Indices with nonzero entries.
IndexSet support(const Vector& v, double threshold = 0.0);

/// m x |S| matrix whose j-th column is column S[j] of A.
Matrix columns(const Matrix& A, const IndexSet& S);
/// A_S^T A_T
Matrix gram(const Matrix& A, const IndexSet& S, const IndexSet& T);
/// v restricted to S.
Vector gather(const Vector& v, const IndexSet& S);
/// Length-n vector equal to values on S and zero elsewhere.
Vector scatter(const Vector& values, const IndexSet& S, Index n);

/// x = G^+ b: the minimal 2-norm minimizer of ||Gx - b||. Singular values
/// sigma_i <= rank_tol * sigma_max are treated as zero.
Vector least_squares_min_norm(const Matrix& G, const Vector& b, double rank_tol = kDefaultRankTol);

/// Rank under the same relative singular value cutoff.
Index numerical_rank(const Matrix& G, double rank_tol = kDefaultRankTol);

/// Orthonormal basis (columns) of range(G).
Matrix range_basis(const Matrix& G, double rank_tol = kDefaultRankTol);

/// Orthonormal basis (columns) of ker(G).
Matrix null_space_basis(const Matrix& G, double rank_tol = kDefaultRankTol);

}  // namespace lassopath
