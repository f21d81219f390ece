#include <random>

#include <gtest/gtest.h>

#include "lassopath/direction.hpp"
#include "lassopath/errors.hpp"
#include "lassopath/fixtures.hpp"
#include "lassopath/homotopy.hpp"
#include "support/brute_force.hpp"

using namespace lassopath;

namespace {

const Tolerances kTol;

// Moves d inside D: along a null-space direction of A_E, as far as the signs allow.
Vector feasible_perturbation(const DirectionProblem& prob, const Vector& d, std::mt19937_64& rng) {
  const IndexSet& E = prob.equicorrelation();
  const Matrix Z = null_space_basis(columns(prob.A(), E));
  if (Z.cols() == 0) return d;
  std::normal_distribution<double> normal;
  Vector w(Z.cols());
  for (Index j = 0; j < w.size(); ++j) w(j) = normal(rng);
  const Vector z = scatter(Z * w, E, prob.dim());
  double alpha = 1.0;
  for (Index i : prob.constrained()) {
    const double s = prob.sign_of(i);
    if (s * z(i) < 0.0) alpha = std::min(alpha, s * d(i) / (-s * z(i)));
  }
  return d + std::max(alpha, 0.0) * z;
}

}  // namespace

TEST(DirectionProblem, AtLorisKink) {
  const DirectionProblem prob = DirectionProblem::at(fixtures::loris(), 192.0, Vector::Zero(3), kTol);
  EXPECT_TRUE(prob.free().empty());
  EXPECT_EQ(prob.constrained(), (IndexSet{0, 2}));
  EXPECT_EQ(prob.signs(), (std::vector<int>{-1, 1}));
  EXPECT_EQ(prob.zero(), (IndexSet{1}));
  EXPECT_EQ(prob.sign_of(1), 0);
  EXPECT_DOUBLE_EQ(prob.t(), 192.0);
}

TEST(DirectionProblem, Validation) {
  const auto inst = fixtures::loris();
  EXPECT_THROW(DirectionProblem(inst, Vector::Ones(2), {}, {0}, {1}), DimensionError);
  EXPECT_THROW(DirectionProblem(inst, Vector::Ones(3), {0}, {0}, {1}), DimensionError);
  EXPECT_THROW(DirectionProblem(inst, Vector::Ones(3), {}, {0}, {2}), DimensionError);
  EXPECT_THROW(DirectionProblem(inst, Vector::Ones(3), {}, {0, 1}, {1}), DimensionError);
  EXPECT_THROW(DirectionProblem(inst, Vector::Ones(3), {}, {3}, {1}), DimensionError);
}

TEST(SolveDirection, Loris) {
  const DirectionProblem prob = DirectionProblem::at(fixtures::loris(), 192.0, Vector::Zero(3), kTol);
  const DirectionCertificate c = solve_direction(prob, kTol);
  EXPECT_NEAR(c.d(0), 0.0, 1e-15);
  EXPECT_NEAR(c.d(1), 0.0, 1e-15);
  EXPECT_NEAR(c.d(2), 1.0 / 48, 1e-15);
  EXPECT_NEAR(c.lambda(0), 1.0 / 12, 1e-13);
  EXPECT_LE(c.lambda(0) * prob.subgradient()(0), 0.0);
  EXPECT_TRUE(direction_set_membership(prob, c.d, kTol).member);

  const DirectionCertificate mn = min_norm_direction(prob, c.d, kTol);
  EXPECT_TRUE(mn.is_min_norm);
  EXPECT_TRUE(mn.d.isApprox(c.d, 1e-14));
}

TEST(SolveDirection, InfiniteKinksSimplex) {
  const DirectionProblem prob = DirectionProblem::at(fixtures::infinite_kinks(), 2.0, Vector::Zero(4), kTol);
  EXPECT_EQ(prob.equicorrelation(), (IndexSet{0, 1, 2}));
  const DirectionCertificate c = solve_direction(prob, kTol);
  EXPECT_NEAR(c.d(0) + c.d(1) + c.d(2), 1.0, 1e-14);
  EXPECT_GE(c.d.minCoeff(), 0.0);
  EXPECT_EQ(c.d(3), 0.0);
  EXPECT_NEAR(direction_objective(prob, c.d), 0.25, 1e-14);

  const DirectionCertificate mn = min_norm_direction(prob, c.d, kTol);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(mn.d(i), 1.0 / 3, 1e-14);
  EXPECT_EQ(mn.d(3), 0.0);

  // Brute force over a grid of the simplex d0 + d1 + d2 = 1.
  double best = 1e300;
  for (int a = 0; a <= 300; ++a)
    for (int b = 0; a + b <= 300; ++b) {
      const double x = a / 300.0, y = b / 300.0, z = 1.0 - x - y;
      best = std::min(best, x * x + y * y + z * z);
    }
  EXPECT_LE(mn.d.squaredNorm(), best + 1e-14);
}

TEST(SolveDirection, EmptyEquicorrelation) {
  const auto inst = fixtures::loris();
  const DirectionProblem prob(inst, make_vector({1, 2, 3}), {}, {}, {});
  const DirectionCertificate c = generalized_direction(prob, kTol);
  EXPECT_TRUE(c.d.isZero(0.0));
  EXPECT_TRUE(c.lambda.isZero(0.0));
  EXPECT_TRUE(c.theta.isApprox(prob.subgradient(), 1e-15));
}

TEST(Membership, LorisExamples) {
  const auto inst = fixtures::loris();
  const Vector good = make_vector({0, 0, 1.0 / 48});
  EXPECT_TRUE(direction_set_membership(inst, 192.0, Vector::Zero(3), good, kTol).member);

  const MembershipReport bad =
      direction_set_membership(inst, 192.0, Vector::Zero(3), make_vector({1.0 / 32, 0, 7.0 / 128}), kTol);
  EXPECT_FALSE(bad.member);
  EXPECT_GT(bad.sign, 0.0);
  EXPECT_EQ(bad.sign_violation_index, 0);

  const MembershipReport zero = direction_set_membership(inst, 192.0, Vector::Zero(3), Vector::Zero(3), kTol);
  EXPECT_FALSE(zero.member);
}

TEST(Membership, ZeroDirectionWhenStationary) {
  // At t = 0 on a least squares solution nothing can move: d = 0 is optimal.
  const auto inst = fixtures::infinite_kinks();
  const DirectionProblem prob(inst, Vector::Zero(2), {0, 3}, {1}, {1});
  EXPECT_TRUE(direction_set_membership(prob, Vector::Zero(4), kTol).member);
}

TEST(PseudoinverseDirection, LorisCandidates) {
  const DirectionProblem prob = DirectionProblem::at(fixtures::loris(), 192.0, Vector::Zero(3), kTol);
  const Vector dE = pseudoinverse_direction(prob, {0, 2}, 1e-12);
  EXPECT_NEAR(dE(0), 1.0 / 32, 1e-15);
  EXPECT_NEAR(dE(2), 7.0 / 128, 1e-15);
  const Vector d2 = pseudoinverse_direction(prob, {2}, 1e-12);
  EXPECT_NEAR(d2(2), 1.0 / 48, 1e-15);
}

TEST(MinNorm, RejectsNonMember) {
  const DirectionProblem prob = DirectionProblem::at(fixtures::loris(), 192.0, Vector::Zero(3), kTol);
  EXPECT_THROW(min_norm_direction(prob, make_vector({1.0 / 32, 0, 7.0 / 128}), kTol), DirectionError);
}

TEST(MinNorm, RandomProblemsAgainstPerturbations) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> pick(0, 2);
  int with_null_space = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Index m = 2 + trial % 3, n = 4 + trial % 3;
    Matrix A(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) A(i, j) = normal(rng);
    Vector b(m);
    for (Index i = 0; i < m; ++i) b(i) = normal(rng);
    std::vector<Index> F, J;
    std::vector<int> s;
    for (Index j = 0; j < n; ++j) {
      const int g = pick(rng);
      if (g == 0) F.push_back(j);
      if (g >= 1) {
        J.push_back(j);
        s.push_back(normal(rng) > 0 ? 1 : -1);
      }
    }
    const DirectionProblem prob(ProblemInstance(A, b), b, IndexSet(F), IndexSet(J), s);
    const DirectionCertificate any = solve_direction(prob, kTol);
    ASSERT_TRUE(direction_set_membership(prob, any.d, kTol).member) << "trial " << trial;
    const DirectionCertificate mn = min_norm_direction(prob, any.d, kTol);
    ASSERT_TRUE(direction_set_membership(prob, mn.d, kTol).member) << "trial " << trial;
    if (numerical_rank(columns(A, prob.equicorrelation())) < prob.equicorrelation().size()) ++with_null_space;
    for (int k = 0; k < 100; ++k) {
      const Vector d2 = feasible_perturbation(prob, mn.d, rng);
      ASSERT_TRUE(direction_set_membership(prob, d2, kTol).member);
      EXPECT_LE(mn.d.norm(), d2.norm() + 1e-10) << "trial " << trial;
    }
  }
  EXPECT_GT(with_null_space, 10);
}

TEST(MinNorm, SingletonMatchesSolve) {
  // Injective A_E: D has one element.
  const auto inst = fixtures::gaussian(6, 4, 9);
  const DirectionProblem prob(inst, inst.f(), {0}, {1, 3}, {1, -1});
  const DirectionCertificate any = solve_direction(prob, kTol);
  const DirectionCertificate mn = min_norm_direction(prob, any.d, kTol);
  EXPECT_LE((mn.d - any.d).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Direction, DependsOnlyOnSetsAndSigns) {
  // Inside a segment E, A and p_E are fixed, so the generalized direction computed
  // at the kink and at an interior point must agree.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = fixtures::gaussian(4, 7, seed);
    const SolutionPath path = run_generalized(inst);
    for (std::size_t j = 0; j + 1 < path.kinks.size(); ++j) {
      const auto& a = path.kinks[j];
      const auto& b = path.kinks[j + 1];
      const double tm = 0.5 * (a.t + b.t);
      if (tm <= 0.0) continue;
      const Vector um = 0.5 * (a.u + b.u);
      const DirectionProblem pm = DirectionProblem::at(inst, tm, um, kTol);
      const DirectionProblem pk = DirectionProblem::at(inst, a.t, a.u, kTol);
      if (!(pm.equicorrelation() == pk.equicorrelation()) || !(pm.free() == pk.free())) continue;
      const Vector dm = generalized_direction(pm, kTol).d;
      const Vector dk = generalized_direction(pk, kTol).d;
      EXPECT_LE((dm - dk).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, dk.cwiseAbs().maxCoeff()))
          << "seed " << seed << " segment " << j;
    }
  }
}
