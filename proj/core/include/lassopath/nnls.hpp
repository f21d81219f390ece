#pragma once

#include <cstddef>

#include "lassopath/linalg.hpp"

namespace lassopath {

struct NnlsOptions {
  /// A zero variable may enter when its gradient component exceeds
  /// gradient_tol * max(1, ||M^T b||_inf).
  double gradient_tol = 1e-11;
  double rank_tol = kDefaultRankTol;
  /// 0 selects 30 * (n + 1) + 100.
  std::size_t max_iters = 0;
};

struct NnlsResult {
  Vector x;
  /// M^T (b - M x); nonpositive on zero variables and ~0 on positive ones at optimality.
  Vector gradient;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// min ||Mx - b||_2  subject to  x >= 0.
///
/// Lawson-Hanson active-set method. Entering variables are chosen by the lowest
/// eligible index rather than the largest gradient, which makes the pivot
/// sequence a deterministic function of the data and rules out cycling.
NnlsResult nnls(const Matrix& M, const Vector& b, const NnlsOptions& opts = {});

struct LdpResult {
  Vector v;
  bool feasible = false;
};

/// Least distance programming: min ||v||_2 subject to G v >= h, reduced to an
/// NNLS problem on [G^T; h^T].
LdpResult least_distance(const Matrix& G, const Vector& h, const NnlsOptions& opts = {});

}  // namespace lassopath
