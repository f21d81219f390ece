#include <cmath>

#include <gtest/gtest.h>

#include "lassopath/errors.hpp"
#include "lassopath/fixtures.hpp"
#include "lassopath/homotopy.hpp"
#include "lassopath/oracle.hpp"

using namespace lassopath;

namespace {

const Tolerances kTol;

bool has_trigger(const StepSizeBreakdown& b, Index i, StepTrigger kind) {
  for (const auto& e : b.triggering)
    if (e.index == i && e.kind == kind) return true;
  return false;
}

Vector segment_direction(const SolutionPath& path, std::size_t j) {
  return (path.kinks[j + 1].u - path.kinks[j].u) / (path.kinks[j].t - path.kinks[j + 1].t);
}

}  // namespace

TEST(StepSize, InfiniteKinks) {
  const auto inst = fixtures::infinite_kinks();
  const DirectionProblem prob = DirectionProblem::at(inst, 2.0, Vector::Zero(4), kTol);
  const DirectionCertificate c = certify(prob, make_vector({1.0 / 3, 1.0 / 3, 1.0 / 3, 0}));
  const StepSizeBreakdown b = step_size(inst, 2.0, Vector::Zero(4), c, kTol);
  EXPECT_NEAR(b.s_EC, 1.0, 1e-14);
  EXPECT_NEAR(b.s, 1.0, 1e-14);
  EXPECT_NEAR(b.delta, 1.0, 1e-14);
  EXPECT_EQ(b.s_A, StepSizeBreakdown::kNone);
  EXPECT_TRUE(has_trigger(b, 3, StepTrigger::CorrelationHitsBoundary));
}

TEST(StepSize, Loris) {
  const auto inst = fixtures::loris();
  const DirectionProblem prob = DirectionProblem::at(inst, 192.0, Vector::Zero(3), kTol);
  const DirectionCertificate c = certify(prob, make_vector({0, 0, 1.0 / 48}));
  const StepSizeBreakdown b = step_size(inst, 192.0, Vector::Zero(3), c, kTol);
  EXPECT_NEAR(b.s_EminusA, 7.68, 1e-12);
  EXPECT_NEAR(b.s_EC, 63.0, 1e-12);
  EXPECT_NEAR(b.s, 63.0, 1e-12);
  EXPECT_NEAR(b.delta, 129.0, 1e-12);
  ASSERT_EQ(b.triggering.size(), 1u);
  EXPECT_TRUE(has_trigger(b, 1, StepTrigger::CorrelationHitsBoundary));

  // p_1 along the segment is 42/t + 1/3; it reaches 1 exactly at 63 and not before.
  for (int k = 1; k < 1000; ++k) {
    const double t = 192.0 - 129.0 * k / 1000.0;
    const Vector p = subgradient(inst, t, make_vector({0, 0, (192.0 - t) / 48.0}));
    EXPECT_NEAR(p(1), 42.0 / t + 1.0 / 3.0, 1e-13);
    EXPECT_LT(p.cwiseAbs().maxCoeff(), 1.0 + 1e-12);
  }
}

TEST(StepSize, ZeroDirectionRunsToZero) {
  // f = 0: every correlation vanishes and d = 0 is certified.
  const ProblemInstance inst(Matrix::Identity(2, 2), Vector::Zero(2));
  const DirectionProblem prob = DirectionProblem::at(inst, 1.0, Vector::Zero(2), kTol);
  ASSERT_TRUE(prob.equicorrelation().empty());
  const DirectionCertificate c = certify(prob, Vector::Zero(2));
  const StepSizeBreakdown b = step_size(inst, 1.0, Vector::Zero(2), c, kTol);
  EXPECT_EQ(b.s, 0.0);
  EXPECT_EQ(b.delta, 1.0);
  EXPECT_TRUE(b.triggering.empty());
  EXPECT_EQ(b.s_A, StepSizeBreakdown::kNone);
  EXPECT_EQ(b.s_EminusA, StepSizeBreakdown::kNone);
}

TEST(Generalized, Loris) {
  const SolutionPath path = run_generalized(fixtures::loris());
  EXPECT_EQ(path.t0, 192.0);
  ASSERT_GE(path.kinks.size(), 3u);
  EXPECT_NEAR(path.kinks[1].t, 63.0, 1e-9);
  EXPECT_EQ(path.kinks.back().t, 0.0);
  EXPECT_EQ(path.termination.kind, TerminationKind::ReachedZero);
  EXPECT_TRUE(verify_path(path).pass);
}

TEST(Generalized, InfiniteKinks) {
  const SolutionPath path = run_generalized(fixtures::infinite_kinks());
  ASSERT_EQ(path.kinks.size(), 3u);
  EXPECT_NEAR(path.kinks[1].t, 1.0, 1e-12);
  for (Index i = 0; i < 3; ++i) {
    EXPECT_NEAR(path.kinks[1].u(i), 1.0 / 3, 1e-12);
    EXPECT_NEAR(path.kinks[2].u(i), 2.0 / 3, 1e-12);
  }
  EXPECT_NEAR(path.kinks[1].u(3), 0.0, 1e-12);
  EXPECT_NEAR(path.kinks[2].u(3), 1.0, 1e-12);
}

TEST(AllAlgorithms, ZeroRhs) {
  const ProblemInstance inst(fixtures::loris().A(), Vector::Zero(3));
  for (Algorithm a : {Algorithm::Generalized, Algorithm::Standard, Algorithm::Looping}) {
    HomotopyConfig cfg;
    cfg.algorithm = a;
    const SolutionPath path = run_homotopy(inst, cfg);
    ASSERT_EQ(path.kinks.size(), 1u);
    EXPECT_EQ(path.kinks[0].t, 0.0);
    EXPECT_TRUE(path.kinks[0].u.isZero(0.0));
    EXPECT_EQ(path.termination.kind, TerminationKind::ReachedZero);
  }
}

TEST(Standard, LorisSignInconsistency) {
  const SolutionPath path = run_standard(fixtures::loris());
  EXPECT_EQ(path.termination.kind, TerminationKind::SignInconsistency);
  EXPECT_EQ(path.termination.index, 0);
  EXPECT_NEAR(path.termination.t, 192.0, 1e-9);
  EXPECT_EQ(path.kinks.size(), 1u);
}

TEST(Looping, LorisAcceptsSingleton) {
  const SolutionPath path = run_looping(fixtures::loris());
  const SolutionPath gen = run_generalized(fixtures::loris());
  ASSERT_EQ(path.kinks.size(), gen.kinks.size());
  const Vector d0 = segment_direction(path, 0);
  EXPECT_NEAR(d0(0), 0.0, 1e-15);
  EXPECT_NEAR(d0(2), 1.0 / 48, 1e-15);
  for (std::size_t k = 0; k < gen.kinks.size(); ++k) {
    EXPECT_NEAR(path.kinks[k].t, gen.kinks[k].t, 1e-9);
    EXPECT_LE((path.kinks[k].u - gen.kinks[k].u).cwiseAbs().maxCoeff(), 1e-9);
  }
  EXPECT_TRUE(verify_path(path).pass);
}

TEST(Looping, CapGuard) {
  HomotopyConfig cfg;
  cfg.loop_cap = 2;
  // Four tied correlations at t = 2 on the Tibshirani instance.
  EXPECT_THROW(run_looping(fixtures::tibshirani(), cfg), LoopCapExceeded);
  cfg.loop_cap = 20;
  EXPECT_TRUE(verify_path(run_looping(fixtures::tibshirani(), cfg)).pass);
}

TEST(Standard, MatchesGeneralizedWhenOneAtATime) {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = fixtures::gaussian(3, 6, seed);
    const SolutionPath gen = run_generalized(inst);
    if (!one_at_a_time_report(gen).holds) continue;
    const SolutionPath std_path = run_standard(inst);
    ASSERT_EQ(std_path.termination.kind, TerminationKind::ReachedZero) << "seed " << seed;
    ASSERT_EQ(std_path.kinks.size(), gen.kinks.size()) << "seed " << seed;
    for (std::size_t k = 0; k < gen.kinks.size(); ++k) {
      EXPECT_NEAR(std_path.kinks[k].t, gen.kinks[k].t, 1e-8);
      EXPECT_LE((std_path.kinks[k].u - gen.kinks[k].u).cwiseAbs().maxCoeff(), 1e-8);
    }
    // Looping accepts its first candidate in this regime.
    const SolutionPath loop = run_looping(inst);
    ASSERT_EQ(loop.kinks.size(), gen.kinks.size());
    for (std::size_t k = 0; k < gen.kinks.size(); ++k) EXPECT_NEAR(loop.kinks[k].t, gen.kinks[k].t, 1e-8);
    ++compared;
  }
  EXPECT_GE(compared, 20);
}

TEST(Generalized, GaussianRegressionFixture) {
  const auto inst = fixtures::gaussian(3, 6, 7);
  const SolutionPath path = run_generalized(inst);
  EXPECT_TRUE(one_at_a_time_report(path).holds);
  EXPECT_TRUE(verify_path(path).pass);
}

TEST(Generalized, IterationCap) {
  HomotopyConfig cfg;
  cfg.tol.max_iters = 1;
  const SolutionPath path = run_generalized(fixtures::loris(), cfg);
  EXPECT_EQ(path.termination.kind, TerminationKind::IterationCap);
  EXPECT_EQ(path.kinks.size(), 2u);
  EXPECT_NO_THROW(path.check_structure());
}

TEST(Generalized, MidpointRecording) {
  HomotopyConfig cfg;
  cfg.record_midpoint_checks = true;
  const SolutionPath path = run_generalized(fixtures::loris(), cfg);
  ASSERT_EQ(path.midpoint_residuals.size(), path.kinks.size() - 1);
  for (double r : path.midpoint_residuals) EXPECT_LE(r, 1e-10);
}

TEST(Generalized, EnteringSignProperty) {
  // A single undecided index that just joined E moves in the direction of its correlation.
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = fixtures::gaussian(5, 9, seed);
    const SolutionPath path = run_generalized(inst);
    const OneAtATimeReport rep = one_at_a_time_report(path);
    for (std::size_t j = 1; j + 1 < path.kinks.size(); ++j) {
      const auto& k = path.kinks[j];
      const IndexSet undecided = set_difference(k.E, k.active);
      if (undecided.size() != 1 || rep.kinks[j].hitting.size() != 1) continue;
      const Index i = undecided[0];
      if (rep.kinks[j].hitting[0] != i) continue;
      EXPECT_GT(segment_direction(path, j)(i) * k.p(i), 0.0) << "seed " << seed << " kink " << j;
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(Generalized, NormGrowthWithRepeatedSigns) {
  // Consecutive directions sharing (E, p_E) have strictly growing norms.
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto inst = fixtures::bernoulli(6, 10, seed);
    const SolutionPath path = run_generalized(inst);
    for (std::size_t j = 0; j + 2 < path.kinks.size(); ++j) {
      const auto& a = path.kinks[j];
      const auto& b = path.kinks[j + 1];
      if (b.t == 0.0 || !(a.E == b.E)) continue;
      if ((gather(a.p, a.E) - gather(b.p, b.E)).cwiseAbs().maxCoeff() > 1e-9) continue;
      EXPECT_LT(segment_direction(path, j).norm(), segment_direction(path, j + 1).norm() + 1e-12)
          << "seed " << seed << " kink " << j;
    }
  }
}

TEST(Adversarial, KinksHalve) {
  const SolutionPath path = adversarial_demo(5);
  ASSERT_EQ(path.kinks.size(), 5u);
  const double expected[] = {2, 1, 0.5, 0.25, 0.125};
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(path.kinks[k].t, expected[k], 1e-12);
  EXPECT_EQ(adversarial_demo(1).kinks.size(), 1u);
  EXPECT_THROW(adversarial_demo(0), DomainError);
}

TEST(OneAtATime, Reports) {
  EXPECT_FALSE(one_at_a_time_report(run_generalized(fixtures::tibshirani())).holds);
  const ProblemInstance inst(fixtures::loris().A(), Vector::Zero(3));
  EXPECT_TRUE(one_at_a_time_report(run_generalized(inst)).holds);
  const auto rep = one_at_a_time_report(run_generalized(fixtures::infinite_kinks()));
  EXPECT_EQ(rep.kinks[0].hitting, (IndexSet{0, 1, 2}));
}
