#pragma once

// State of the Lasso problem  min_u  1/2 ||Au - f||^2 + t ||u||_1  along a
// solution path: residuals, subgradients, equicorrelation and active sets, and
// the piecewise-linear path itself.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lassopath/linalg.hpp"

namespace lassopath {

/// Numerical thresholds shared by the path algorithms. The underlying theory is
/// exact; these decide membership questions in floating point.
struct Tolerances {
  /// |  |A_i^T(Au - f)| - t  | <= eq_tol * max(1, t)  puts i in E(t).
  double eq_tol = 1e-9;
  /// |u_i| > act_tol puts i in the active set.
  double act_tol = 1e-12;
  /// Residual bound for KKT and direction-set certificates.
  double kkt_tol = 1e-8;
  /// Relative singular value cutoff for pseudoinverses.
  double rank_tol = kDefaultRankTol;
  /// Safety cap on the number of kinks.
  std::size_t max_iters = 100000;

  /// Throws DomainError unless every field is strictly positive.
  void validate() const;
};

/// The immutable pair (A, f). Copies share storage.
class ProblemInstance {
 public:
  /// Throws DimensionError if f.size() != A.rows(), A is empty, or any entry is non-finite.
  ProblemInstance(Matrix A, Vector f);

  const Matrix& A() const noexcept { return *A_; }
  const Vector& f() const noexcept { return *f_; }
  Index rows() const noexcept { return A_->rows(); }
  Index cols() const noexcept { return A_->cols(); }
  /// ||A^T f||_inf, the largest parameter with a nonzero solution.
  double t0() const noexcept { return t0_; }

 private:
  std::shared_ptr<const Matrix> A_;
  std::shared_ptr<const Vector> f_;
  double t0_;
};

/// f - Au
Vector residual(const ProblemInstance& inst, const Vector& u);

/// 1/2 ||Au - f||^2 + t ||u||_1
double energy(const ProblemInstance& inst, double t, const Vector& u);

/// p = (1/t) A^T (f - Au). Throws DomainError for t <= 0.
Vector subgradient(const ProblemInstance& inst, double t, const Vector& u);

/// E(t, u). For t == 0 this returns every index: the path convention is E(0) = [N].
IndexSet equicorrelation_set(const ProblemInstance& inst, double t, const Vector& u,
                             const Tolerances& tol);

/// supp(u) under the act_tol threshold.
IndexSet active_set(const Vector& u, const Tolerances& tol);

/// One kink of a path, with everything derivable from (t, u) precomputed.
struct PathPoint {
  double t = 0.0;
  Vector u;
  Vector r;  ///< f - Au
  Vector p;  ///< subgradient; at t == 0 the limit from the final segment
  IndexSet E;
  IndexSet active;
};

/// Builds a PathPoint from (t, u). At t == 0 the subgradient is not defined by
/// the residual; pass the limit from the last positive kink (zero if omitted).
PathPoint make_path_point(const ProblemInstance& inst, double t, Vector u, const Tolerances& tol,
                          const std::optional<Vector>& terminal_subgradient = std::nullopt);

enum class TerminationKind { ReachedZero, IterationCap, SignInconsistency };

struct Termination {
  TerminationKind kind = TerminationKind::ReachedZero;
  /// Offending index and parameter for SignInconsistency; unused otherwise.
  Index index = -1;
  double t = 0.0;
};

std::string to_string(TerminationKind kind);
std::optional<TerminationKind> termination_from_string(const std::string& s);

/// Ordered kinks t0 > t1 > ... with the path evaluable anywhere by linear interpolation.
///
/// Invariants: kinks[0] is (t0, 0); t strictly decreases; on ReachedZero the last
/// kink sits at t = 0.
struct SolutionPath {
  ProblemInstance instance;
  std::vector<PathPoint> kinks;
  double t0 = 0.0;
  Termination termination;
  /// KKT residual at each segment midpoint, filled when the engine is asked to record it.
  std::vector<double> midpoint_residuals;

  /// Throws FormatError if the structural invariants above do not hold.
  void check_structure() const;
};

/// The serialized form of a path: kinks as (t, u) only.
struct KinkRecord {
  double t = 0.0;
  Vector u;
};

struct PathRecord {
  Index m = 0;
  Index n = 0;
  double t0 = 0.0;
  Termination termination;
  std::vector<KinkRecord> kinks;

  /// Throws FormatError if dimensions, ordering, or the first kink are inconsistent.
  void check_structure() const;
};

PathRecord to_record(const SolutionPath& path);

/// Rebuilds a path for `inst`, recomputing r, p, E and the active set at every
/// kink. Throws FormatError when the record does not belong to `inst`.
SolutionPath from_record(const PathRecord& record, const ProblemInstance& inst, const Tolerances& tol);

struct PathValue {
  Vector u;
  /// True when t lies below the last kink of a path that did not reach zero;
  /// u is then the last kink's solution, not a certified minimizer.
  bool extrapolated = false;
};

PathValue eval_path(const SolutionPath& path, double t);
PathValue eval_path(const PathRecord& path, double t);

/// Hitting and leaving coordinates at one kink.
struct KinkEvents {
  double t = 0.0;
  IndexSet hitting;  ///< E(t^j) \ E(t^{j-1})
  IndexSet leaving;  ///< A(u(t^{j-1})) \ A(u(t^j))
};

struct OneAtATimeReport {
  std::vector<KinkEvents> kinks;
  /// |hitting| + |leaving| <= 1 at every kink with t > 0.
  bool holds = true;
};

}  // namespace lassopath
