#include "lassopath/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "lassopath/errors.hpp"

namespace lassopath::fixtures {

ProblemInstance loris() {
  return {make_matrix(3, 3, {-3, 4, 4,   //
                             -5, 1, 4,   //
                             5, 1, -4}),
          make_vector({24, 17, -7})};
}

ProblemInstance tibshirani() {
  return {make_matrix(3, 4, {-1, 1, 1, 1,   //
                             1, -1, 1, 1,   //
                             1, 1, 1, -1}),
          make_vector({-1, -3, -1})};
}

ProblemInstance infinite_kinks() {
  return {make_matrix(2, 4, {1, 1, 1, 0,  //
                             0, 0, 0, 1}),
          make_vector({2, 1})};
}

namespace {

void check_dims(Index m, Index n) {
  if (m < 1 || n < 1) throw DimensionError("generated instances need m, n >= 1");
}

}  // namespace

ProblemInstance gaussian(Index m, Index n, std::uint64_t seed) {
  check_dims(m, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix A(m, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) A(i, j) = scale * normal(rng);
  }
  Vector f(m);
  for (Index i = 0; i < m; ++i) f(i) = normal(rng);
  return {std::move(A), std::move(f)};
}

ProblemInstance bernoulli(Index m, Index n, std::uint64_t seed) {
  check_dims(m, n);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  Matrix A(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) A(i, j) = coin(rng) ? 1.0 : -1.0;
  }
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  const Index k = std::min(n, std::max<Index>(1, m / 4));
  Vector v = Vector::Zero(n);
  for (Index j = 0; j < k; ++j) v(perm[static_cast<std::size_t>(j)]) = coin(rng) ? 1.0 : -1.0;
  Vector f = A * v;
  if (f.isZero(0.0)) f(0) = 1.0;
  return {std::move(A), std::move(f)};
}

}  // namespace lassopath::fixtures
