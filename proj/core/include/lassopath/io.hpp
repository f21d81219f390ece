#pragma once

// Text formats: Matrix Market or CSV matrices, plain vectors, and the JSON forms
// of solution paths and verification reports.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lassopath/linalg.hpp"
#include "lassopath/oracle.hpp"
#include "lassopath/problem.hpp"

namespace lassopath::io {

/// Reads a dense matrix. Input starting with a %%MatrixMarket banner is parsed as
/// Matrix Market (array or coordinate; real or integer; general); anything else as
/// CSV with one matrix row per line. Throws ParseError with line and column.
Matrix read_matrix(std::istream& in);
Matrix read_matrix(const std::filesystem::path& file);

/// Reads a vector: numbers separated by commas, blanks or newlines, or a
/// Matrix Market array with a single column.
Vector read_vector(std::istream& in);
Vector read_vector(const std::filesystem::path& file);

/// Matrix Market array format, full round-trip precision.
void write_matrix_market(std::ostream& out, const Matrix& A);
/// One entry per line, full round-trip precision.
void write_vector(std::ostream& out, const Vector& v);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

std::string path_to_json(const PathRecord& path);
/// Structural validation only; FormatError on a bad document.
PathRecord path_from_json(const std::string& text);

void write_path(const std::filesystem::path& file, const PathRecord& path);
PathRecord read_path(const std::filesystem::path& file);

std::string report_to_json(const VerificationReport& report);
VerificationReport report_from_json(const std::string& text);

}  // namespace lassopath::io
