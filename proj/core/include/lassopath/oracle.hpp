#pragma once

// Independent checks for path solutions: a proximal gradient solver at fixed t,
// a first-order optimality checker, and sampled verification of whole paths.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lassopath/linalg.hpp"
#include "lassopath/problem.hpp"

namespace lassopath {

struct OracleConfig {
  std::size_t max_iters = 400000;
  /// Stop once the duality gap is below obj_tol * (1 + ||f||^2 / 2).
  double obj_tol = 1e-10;
  /// Step length; 0 means 1 / lipschitz_bound(A).
  double step = 0.0;
};

struct FistaResult {
  Vector u;
  double objective = 0.0;
  /// Duality gap at exit, an upper bound on objective - min.
  double gap = 0.0;
  std::size_t iterations = 0;
};

/// 1.01 times a 50-step power iteration estimate of ||A^T A||_2.
double lipschitz_bound(const Matrix& A);

/// Accelerated proximal gradient with soft thresholding and function-value
/// restart. Throws ConvergenceError (carrying the last iterate) at the cap.
FistaResult fista_solve(const ProblemInstance& inst, double t, const OracleConfig& cfg = {},
                        const std::optional<Vector>& warm_start = std::nullopt);

/// For t > 0: max( (||p||_inf - 1)_+ , max_{i active} |p_i - sgn u_i| ), p = A^T(f - Au)/t.
/// For t = 0: ||A^T(Au - f)||_inf / (1 + ||A^T f||_inf).
double kkt_check(const ProblemInstance& inst, double t, const Vector& u, const Tolerances& tol);

/// The semi-explicit candidate beta_E = A_E^+ (f - (A_E^T)^+ t p_E), zero off E,
/// with E and p read off the optimal point u_ref.
Vector tibshirani_beta(const ProblemInstance& inst, double t, const Vector& u_ref, const Tolerances& tol);

struct VerifyConfig {
  std::size_t n_samples = 100;
  std::uint64_t seed = 0;
  /// A sample passes with kkt_residual <= kkt_tol and
  /// objective_gap <= obj_tol * (1 + ||f||^2 / 2).
  double kkt_tol = 1e-7;
  double obj_tol = 1e-6;
  /// Random samples are drawn log-uniformly from [sample_floor * t0, t0].
  double sample_floor = 1e-4;
  Tolerances tol;
  OracleConfig oracle;
  /// Worker threads; 0 means hardware concurrency. LASSOPATH_THREADS caps either.
  unsigned threads = 0;
};

struct VerificationSample {
  double t = 0.0;
  double kkt_residual = 0.0;
  /// |E_t(u_path) - E_t(u_oracle)| for t > 0. At t = 0, how far ||u(0)||_1
  /// exceeds the l1 norm of the minimal-norm least squares solution.
  double objective_gap = 0.0;
};

struct VerificationReport {
  bool pass = true;
  double worst_t = 0.0;
  std::uint64_t seed = 0;
  std::vector<VerificationSample> samples;
};

/// Samples every positive kink, every segment midpoint and random fill up to
/// n_samples, plus t = 0 when the path reaches it. Failures are reported, not thrown.
VerificationReport verify_path(const SolutionPath& path, const VerifyConfig& cfg = {});

}  // namespace lassopath
