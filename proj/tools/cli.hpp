#pragma once

#include <iosfwd>

namespace lassopath::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kSignInconsistency = 2;
inline constexpr int kCapReached = 3;
inline constexpr int kVerificationFailed = 4;

/// Entry point of the lassopath tool, with the streams made explicit for testing.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lassopath::cli
