#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "lassopath/errors.hpp"
#include "lassopath/fixtures.hpp"
#include "lassopath/homotopy.hpp"
#include "lassopath/io.hpp"

using namespace lassopath;

namespace {

Matrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return io::read_matrix(in);
}

Vector parse_vector(const std::string& text) {
  std::istringstream in(text);
  return io::read_vector(in);
}

void expect_parse_error(const std::string& text, std::size_t line, std::size_t column) {
  try {
    parse_matrix(text);
    ADD_FAILURE() << "no error for:\n" << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_EQ(e.column(), column) << e.what();
  }
}

}  // namespace

TEST(ReadMatrix, Csv) {
  const Matrix A = parse_matrix("1, 2,3\n4,5, 6\n");
  EXPECT_EQ(A, make_matrix(2, 3, {1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(parse_matrix("\n# comment\n-1.5e2\n"), make_matrix(1, 1, {-150}));
}

TEST(ReadMatrix, MatrixMarketArray) {
  // Column-major entries.
  const Matrix A = parse_matrix("%%MatrixMarket matrix array real general\n% c\n2 2\n1\n3\n2\n4\n");
  EXPECT_EQ(A, make_matrix(2, 2, {1, 2, 3, 4}));
}

TEST(ReadMatrix, MatrixMarketCoordinate) {
  const Matrix A = parse_matrix("%%MatrixMarket matrix coordinate integer general\n2 3 2\n1 3 7\n2 1 -2\n");
  EXPECT_EQ(A, make_matrix(2, 3, {0, 0, 7, -2, 0, 0}));
}

TEST(ReadMatrix, ErrorPositions) {
  expect_parse_error("1,2\n3,x\n", 2, 3);
  expect_parse_error("1,2\n3\n", 2, 1);
  expect_parse_error("%%MatrixMarket matrix array complex general\n1 1\n1\n", 1, 29);
  expect_parse_error("%%MatrixMarket matrix array real symmetric\n1 1\n1\n", 1, 34);
  expect_parse_error("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n", 3, 1);
  expect_parse_error("%%MatrixMarket matrix array real general\n2 1\n1\n", 4, 1);
  EXPECT_THROW(parse_matrix(""), ParseError);
  EXPECT_THROW(parse_matrix("1,nan\n"), ParseError);
}

TEST(ReadVector, Forms) {
  EXPECT_EQ(parse_vector("1\n2\n3\n"), make_vector({1, 2, 3}));
  EXPECT_EQ(parse_vector("1, 2 3"), make_vector({1, 2, 3}));
  EXPECT_EQ(parse_vector("%%MatrixMarket matrix array real general\n2 1\n5\n6\n"), make_vector({5, 6}));
  EXPECT_THROW(parse_vector("%%MatrixMarket matrix array real general\n1 2\n5\n6\n"), ParseError);
  EXPECT_THROW(parse_vector("1\nabc\n"), ParseError);
}

TEST(Write, RoundTrip) {
  const Matrix A = fixtures::gaussian(4, 3, 1).A();
  std::stringstream mm;
  io::write_matrix_market(mm, A);
  EXPECT_EQ(io::read_matrix(mm), A);
  const Vector v = fixtures::gaussian(4, 3, 1).f();
  std::stringstream vs;
  io::write_vector(vs, v);
  EXPECT_EQ(io::read_vector(vs), v);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(63.0), "63");
  for (double v : {1.0 / 3, 63.000000000000014, 1e-300, -2.5e17, std::numeric_limits<double>::denorm_min()})
    EXPECT_EQ(std::strtod(io::format_double(v).c_str(), nullptr), v);
}

TEST(PathJson, RoundTripIsBitExact) {
  const PathRecord rec = to_record(run_generalized(fixtures::loris()));
  const std::string text = io::path_to_json(rec);
  EXPECT_EQ(text.find("\"m\""), text.find('"'));
  const PathRecord back = io::path_from_json(text);
  ASSERT_EQ(back.kinks.size(), rec.kinks.size());
  for (std::size_t k = 0; k < rec.kinks.size(); ++k) {
    EXPECT_EQ(back.kinks[k].t, rec.kinks[k].t);
    EXPECT_EQ(back.kinks[k].u, rec.kinks[k].u);
  }
  EXPECT_EQ(back.termination.kind, TerminationKind::ReachedZero);
  EXPECT_EQ(io::path_to_json(back), text);
}

TEST(PathJson, SignInconsistencyFields) {
  const PathRecord rec = to_record(run_standard(fixtures::loris()));
  const PathRecord back = io::path_from_json(io::path_to_json(rec));
  EXPECT_EQ(back.termination.kind, TerminationKind::SignInconsistency);
  EXPECT_EQ(back.termination.index, 0);
  EXPECT_EQ(back.termination.t, 192.0);
}

TEST(PathJson, Rejects) {
  EXPECT_THROW(io::path_from_json("{"), FormatError);
  EXPECT_THROW(io::path_from_json("[]"), FormatError);
  EXPECT_THROW(io::path_from_json(R"({"m":1,"n":1,"t0":1,"termination":"ReachedZero"})"), FormatError);
  EXPECT_THROW(io::path_from_json(R"({"m":1,"n":1,"t0":1,"termination":"Done","kinks":[]})"), FormatError);
  EXPECT_THROW(io::path_from_json(
                   R"({"m":1,"n":1,"t0":1,"termination":"ReachedZero","kinks":[{"t":1,"u":[0]},{"t":2,"u":[1]}]})"),
               FormatError);
  EXPECT_THROW(io::path_from_json(R"({"m":1,"n":2,"t0":1,"termination":"ReachedZero","kinks":[{"t":1,"u":[0]}]})"),
               FormatError);
  EXPECT_NO_THROW(io::path_from_json(
      R"({"m":1,"n":1,"t0":1,"termination":"ReachedZero","kinks":[{"t":1,"u":[0]},{"t":0,"u":[1]}]})"));
}

TEST(PathJson, Files) {
  const auto dir = std::filesystem::temp_directory_path() / "lassopath_io_test";
  std::filesystem::create_directories(dir);
  const PathRecord rec = to_record(run_generalized(fixtures::infinite_kinks()));
  io::write_path(dir / "p.json", rec);
  EXPECT_EQ(io::read_path(dir / "p.json").kinks.size(), 3u);
  EXPECT_THROW(io::read_path(dir / "missing.json"), Error);
  std::filesystem::remove_all(dir);
}

TEST(ReportJson, RoundTrip) {
  VerificationReport rep;
  rep.pass = false;
  rep.worst_t = 8.5;
  rep.seed = 99;
  rep.samples = {{1.0, 1e-9, 2e-9}, {0.0, 0.5, 0.0}};
  const std::string text = io::report_to_json(rep);
  const VerificationReport back = io::report_from_json(text);
  EXPECT_EQ(back.pass, false);
  EXPECT_EQ(back.worst_t, 8.5);
  EXPECT_EQ(back.seed, 99u);
  ASSERT_EQ(back.samples.size(), 2u);
  EXPECT_EQ(back.samples[1].kkt_residual, 0.5);
  EXPECT_THROW(io::report_from_json(R"({"pass":true})"), FormatError);
}
