#include <random>

#include <gtest/gtest.h>

#include "lassopath/nnls.hpp"
#include "support/brute_force.hpp"

using namespace lassopath;

TEST(Nnls, SimpleBound) {
  // Unconstrained optimum (1, -1); the constraint pins x1 = 0.
  const NnlsResult r = nnls(Matrix::Identity(2, 2), make_vector({1, -1}));
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.x(0), 1.0, 1e-15);
  EXPECT_EQ(r.x(1), 0.0);
  EXPECT_NEAR(r.residual_norm, 1.0, 1e-15);
  EXPECT_NEAR(r.gradient(1), -1.0, 1e-15);
}

TEST(Nnls, ZeroRhs) {
  const NnlsResult r = nnls(make_matrix(2, 3, {1, 2, 3, 4, 5, 6}), Vector::Zero(2));
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.x.isZero(0.0));
}

TEST(Nnls, MatchesEnumeration) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    const Index m = 1 + trial % 6, n = 1 + (trial / 6) % 6;
    Matrix M(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) M(i, j) = normal(rng);
    if (n >= 3 && trial % 4 == 0) M.col(2) = M.col(0) + M.col(1);
    Vector b(m);
    for (Index i = 0; i < m; ++i) b(i) = normal(rng);

    const NnlsResult r = nnls(M, b);
    ASSERT_TRUE(r.converged) << "trial " << trial;
    EXPECT_GE(r.x.minCoeff(), 0.0);

    bf::SignLs q{M, b, {}, {}, {}};
    for (Index j = 0; j < n; ++j) {
      q.J.push_back(j);
      q.s.push_back(1);
    }
    const double best = bf::enumerate(q).min_objective;
    EXPECT_NEAR((M * r.x - b).squaredNorm(), best, 1e-10 * (1.0 + best)) << "trial " << trial;
  }
}

TEST(Ldp, Basic) {
  // min ||v|| s.t. v0 + v1 >= 2 -> (1, 1).
  const LdpResult r = least_distance(make_matrix(1, 2, {1, 1}), make_vector({2}));
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.v(0), 1.0, 1e-14);
  EXPECT_NEAR(r.v(1), 1.0, 1e-14);

  // Already satisfied at the origin.
  const LdpResult z = least_distance(make_matrix(1, 2, {1, 1}), make_vector({-1}));
  ASSERT_TRUE(z.feasible);
  EXPECT_TRUE(z.v.isZero(1e-15));
}

TEST(Ldp, Infeasible) {
  // v0 >= 1 and -v0 >= 0 cannot both hold.
  const LdpResult r = least_distance(make_matrix(2, 1, {1, -1}), make_vector({1, 0}));
  EXPECT_FALSE(r.feasible);
}
