#pragma once

// Small instances with known paths, and seeded random instance generators.

#include <cstdint>

#include "lassopath/problem.hpp"

namespace lassopath::fixtures {

/// 3x3 instance whose classical homotopy picks a wrongly signed direction at t0 = 192.
ProblemInstance loris();

/// 3x4 instance with four tied correlations at t = 2, where the semi-explicit beta
/// formula produces a wrongly signed coefficient.
ProblemInstance tibshirani();

/// A = [[1,1,1,0],[0,0,0,1]], f = (2,1). Admits paths with infinitely many kinks.
ProblemInstance infinite_kinks();

/// Standard normal entries in A (scaled by 1/sqrt(m)) and in f.
ProblemInstance gaussian(Index m, Index n, std::uint64_t seed);

/// +-1 entries in A; f = A v for a sparse v with +-1 entries on about m/4 coordinates.
/// Integer data makes exact ties in the correlations common.
ProblemInstance bernoulli(Index m, Index n, std::uint64_t seed);

}  // namespace lassopath::fixtures
