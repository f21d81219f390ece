#pragma once

// The set of possible directions D(t, u(t)) at a point of the solution path,
// described as the solution set of a sign-constrained least squares problem:
//
//   minimize ||A d - r/t||^2   s.t.  d_i p_i >= 0  on E \ A,   d_i = 0  off E.
//
// Every element of D continues the path linearly below t. The generalized
// homotopy uses its unique minimal 2-norm element.

#include <vector>

#include "lassopath/linalg.hpp"
#include "lassopath/problem.hpp"

namespace lassopath {

/// Data of one direction subproblem. Indices split into three groups:
/// free (the active set A, unconstrained), constrained (E \ A, with a required
/// sign), and zero (outside E, eliminated).
class DirectionProblem {
 public:
  /// The subproblem at (t, u) on a path: target r(t)/t, signs sgn p(t)_i.
  static DirectionProblem at(const ProblemInstance& inst, double t, const Vector& u,
                             const Tolerances& tol);

  /// A synthetic subproblem. `signs` lines up with `constrained` and holds +-1.
  /// The subgradient is taken to be A^T target.
  DirectionProblem(ProblemInstance inst, Vector target, IndexSet free, IndexSet constrained,
                   std::vector<int> signs);

  const ProblemInstance& instance() const noexcept { return inst_; }
  const Matrix& A() const noexcept { return inst_.A(); }
  /// r(t)/t
  const Vector& target() const noexcept { return target_; }
  /// p = A^T target
  const Vector& subgradient() const noexcept { return p_; }
  const IndexSet& free() const noexcept { return free_; }
  const IndexSet& constrained() const noexcept { return constrained_; }
  const std::vector<int>& signs() const noexcept { return signs_; }
  /// +-1 for constrained indices, 0 otherwise.
  int sign_of(Index i) const;
  const IndexSet& equicorrelation() const noexcept { return E_; }
  const IndexSet& zero() const noexcept { return zero_; }
  Index dim() const noexcept { return inst_.cols(); }
  /// Parameter the problem was built at; 0 for synthetic problems.
  double t() const noexcept { return t_; }

 private:
  ProblemInstance inst_;
  double t_ = 0.0;
  Vector target_;
  Vector p_;
  IndexSet free_;
  IndexSet constrained_;
  std::vector<int> signs_;
  IndexSet E_;
  IndexSet zero_;
};

/// A direction together with the multipliers of its optimality conditions
///   A^T A d - p + lambda + theta = 0,
/// lambda supported on E \ A, theta supported off E.
struct DirectionCertificate {
  Vector d;
  Vector lambda;
  Vector theta;
  bool is_min_norm = false;
};

struct MembershipReport {
  bool member = false;
  /// Largest of the residuals below.
  double max_residual = 0.0;
  double stationarity = 0.0;      ///< |(A^T A d - p)_i| on A
  double support = 0.0;           ///< |d_i| off E
  double sign = 0.0;              ///< violation of d_i p_i >= 0 on E \ A
  double multiplier_sign = 0.0;   ///< violation of lambda_i p_i <= 0 on E \ A
  double complementarity = 0.0;   ///< |lambda_i d_i| on E \ A
  /// Index carrying the largest residual, -1 if none.
  Index worst_index = -1;
  /// Index with the most negative d_i p_i on E \ A, -1 if the signs are all consistent.
  Index sign_violation_index = -1;
};

/// Multipliers in closed form: lambda = (p - A^T A d) on E \ A, theta the same off E.
DirectionCertificate certify(const DirectionProblem& prob, Vector d);

/// ||A d - target||^2
double direction_objective(const DirectionProblem& prob, const Vector& d);

/// Checks d against every optimality condition of the subproblem. d-dependent
/// residuals are measured relative to max(1, ||d||_inf).
MembershipReport direction_set_membership(const DirectionProblem& prob, const Vector& d,
                                          const Tolerances& tol);
MembershipReport direction_set_membership(const ProblemInstance& inst, double t, const Vector& u,
                                          const Vector& d, const Tolerances& tol);

/// Any element of D, by an active-set NNLS in sign-flipped variables with the
/// free variables projected out. Throws DirectionError if the solver stalls.
DirectionCertificate solve_direction(const DirectionProblem& prob, const Tolerances& tol);

/// The unique minimal 2-norm element of D, given any certified member d_any:
///   minimize ||d||^2  s.t.  A d = A d_any,  d = 0 off E,  d_i p_i >= 0 on E \ A.
/// Throws DirectionError if d_any is not a member or the system is infeasible.
DirectionCertificate min_norm_direction(const DirectionProblem& prob, const Vector& d_any,
                                        const Tolerances& tol);

/// d_S = (A_S^T A_S)^+ p_S on S and zero elsewhere (computed as A_S^+ target,
/// which is the same vector).
Vector pseudoinverse_direction(const DirectionProblem& prob, const IndexSet& S, double rank_tol);

/// The direction used by the generalized homotopy: minimal-norm element of D.
/// When |E \ A| <= 1 the two closed-form candidates S = A and S = E are tried first.
DirectionCertificate generalized_direction(const DirectionProblem& prob, const Tolerances& tol);

}  // namespace lassopath
