#pragma once

// Path-following drivers. All three walk down from t0 = ||A^T f||_inf, choosing a
// direction at each kink and moving until the first optimality condition breaks:
//
//   Generalized  minimal-norm element of D (always succeeds, finitely many kinks)
//   Standard     pseudoinverse on S = E \ Leav; fails on sign inconsistencies
//   Looping      pseudoinverse on the first S with A <= S <= E that lies in D

#include <cstddef>
#include <limits>
#include <vector>

#include "lassopath/direction.hpp"
#include "lassopath/linalg.hpp"
#include "lassopath/problem.hpp"

namespace lassopath {

enum class StepTrigger { CoefficientHitsZero, MultiplierSignFlip, CorrelationHitsBoundary };

struct StepEvent {
  Index index = -1;
  StepTrigger kind = StepTrigger::CoefficientHitsZero;
};

/// Next kink along u + (t_hat - t) d. Empty candidate groups stay at -inf.
struct StepSizeBreakdown {
  static constexpr double kNone = -std::numeric_limits<double>::infinity();
  double s_A = kNone;
  double s_EminusA = kNone;
  double s_EC = kNone;
  /// max(s_A, s_EminusA, s_EC, 0)
  double s = 0.0;
  /// t_hat - s
  double delta = 0.0;
  /// Indices attaining s (within eq_tol); empty when s == 0.
  std::vector<StepEvent> triggering;
};

/// Largest step along the certified direction:
///   s_A       max over active i, d_i != 0, of (u_i + t_hat d_i) / d_i below t_hat
///   s_EminusA max over E \ A of t_hat |lambda_i| / (|lambda_i| + 2)
///   s_EC      max over E^C of t_hat g_i / (+-1 - (A^T A d)_i) below t_hat
/// where g = p - A^T A d.
StepSizeBreakdown step_size(const ProblemInstance& inst, double t_hat, const Vector& u,
                            const DirectionCertificate& cert, const Tolerances& tol);

enum class Algorithm { Generalized, Standard, Looping };

struct HomotopyConfig {
  Algorithm algorithm = Algorithm::Generalized;
  Tolerances tol;
  /// Store the KKT residual at every segment midpoint in the path.
  bool record_midpoint_checks = false;
  /// Looping refuses kinks with more than this many undecided indices.
  std::size_t loop_cap = 20;
};

/// Throws DirectionError, with the kink in the message, if no certified direction is found.
SolutionPath run_generalized(const ProblemInstance& inst, const HomotopyConfig& cfg = {});

/// Never throws on sign inconsistency: the path is cut at the offending kink and the
/// termination carries the index and t.
SolutionPath run_standard(const ProblemInstance& inst, const HomotopyConfig& cfg = {});

/// Throws LoopCapExceeded when |E \ A| > cfg.loop_cap at some kink.
SolutionPath run_looping(const ProblemInstance& inst, const HomotopyConfig& cfg = {});

/// Dispatches on cfg.algorithm.
SolutionPath run_homotopy(const ProblemInstance& inst, const HomotopyConfig& cfg);

/// Replays a hand-picked sequence of valid directions on A = [[1,1,1,0],[0,0,0,1]],
/// f = (2,1): (1/2,1/2,0,0) from t = 2, then alternately (3/2,-1,1/2,1) and
/// (3/2,1/2,-1,1), which never reaches t = 0. Returns the first max_kinks kinks.
/// Throws DirectionError if a replayed direction is not in D.
SolutionPath adversarial_demo(std::size_t max_kinks, const Tolerances& tol = {});

OneAtATimeReport one_at_a_time_report(const SolutionPath& path);

}  // namespace lassopath
