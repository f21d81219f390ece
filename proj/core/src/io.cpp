#include "lassopath/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lassopath/errors.hpp"

namespace lassopath::io {

// Insertion-ordered so documents list fields in schema order.
using json = nlohmann::ordered_json;

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

// Splits on commas and blanks, remembering where each token starts.
std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != ',' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

double parse_double(const Token& tok, std::size_t line) {
  std::string_view s = tok.text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("expected a number, found '" + std::string(tok.text) + "'", line, tok.column);
  }
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + std::string(tok.text) + "'", line, tok.column);
  return v;
}

long long parse_int(const Token& tok, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
  if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
    throw ParseError("expected an integer, found '" + std::string(tok.text) + "'", line, tok.column);
  }
  return v;
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct Lines {
  explicit Lines(std::istream& s) : in(s) {}

  std::istream& in;
  std::string current;
  std::size_t number = 0;

  bool next() {
    if (!std::getline(in, current)) return false;
    ++number;
    return true;
  }
};

Matrix read_matrix_market(Lines& lines) {
  const std::vector<Token> banner = tokenize(lines.current);
  if (banner.size() != 5 || lower(banner[1].text) != "matrix") {
    throw ParseError("malformed Matrix Market banner", lines.number, 1);
  }
  const std::string layout = lower(banner[2].text);
  const std::string field = lower(banner[3].text);
  const std::string symmetry = lower(banner[4].text);
  if (layout != "array" && layout != "coordinate") {
    throw ParseError("unsupported layout '" + std::string(banner[2].text) + "'", lines.number, banner[2].column);
  }
  if (field != "real" && field != "integer" && field != "double") {
    throw ParseError("unsupported field '" + std::string(banner[3].text) + "'", lines.number, banner[3].column);
  }
  if (symmetry != "general") {
    throw ParseError("only general matrices are supported", lines.number, banner[4].column);
  }

  // Size line, after comments.
  std::vector<Token> size;
  while (lines.next()) {
    if (blank(lines.current) || lines.current.front() == '%') continue;
    size = tokenize(lines.current);
    break;
  }
  const bool coord = layout == "coordinate";
  if (size.size() != (coord ? 3u : 2u)) {
    throw ParseError(coord ? "expected 'rows cols entries'" : "expected 'rows cols'", lines.number, 1);
  }
  const long long m = parse_int(size[0], lines.number);
  const long long n = parse_int(size[1], lines.number);
  if (m < 1 || n < 1) throw ParseError("matrix dimensions must be positive", lines.number, size[0].column);
  const long long expected = coord ? parse_int(size[2], lines.number) : m * n;
  if (expected < 0) throw ParseError("negative entry count", lines.number, size[2].column);

  Matrix A = Matrix::Zero(m, n);
  long long seen = 0;
  while (seen < expected && lines.next()) {
    if (blank(lines.current) || lines.current.front() == '%') continue;
    const std::vector<Token> toks = tokenize(lines.current);
    if (coord) {
      if (toks.size() != 3) throw ParseError("expected 'row col value'", lines.number, 1);
      const long long i = parse_int(toks[0], lines.number);
      const long long j = parse_int(toks[1], lines.number);
      if (i < 1 || i > m) throw ParseError("row index out of range", lines.number, toks[0].column);
      if (j < 1 || j > n) throw ParseError("column index out of range", lines.number, toks[1].column);
      A(i - 1, j - 1) = parse_double(toks[2], lines.number);
    } else {
      if (toks.size() != 1) throw ParseError("expected one value per line", lines.number, toks[1].column);
      // Array entries run down the columns.
      A(seen % m, seen / m) = parse_double(toks[0], lines.number);
    }
    ++seen;
  }
  if (seen < expected) {
    throw ParseError("expected " + std::to_string(expected) + " entries, found " + std::to_string(seen),
                     lines.number + 1, 1);
  }
  while (lines.next()) {
    if (!blank(lines.current) && lines.current.front() != '%') {
      throw ParseError("unexpected data after the last entry", lines.number, 1);
    }
  }
  return A;
}

Matrix read_csv(Lines& lines) {
  std::vector<double> values;
  std::size_t cols = 0;
  Index rows = 0;
  do {
    if (blank(lines.current) || lines.current.front() == '#') continue;
    const std::vector<Token> toks = tokenize(lines.current);
    if (rows == 0) cols = toks.size();
    if (toks.size() != cols) {
      throw ParseError("row has " + std::to_string(toks.size()) + " fields, expected " + std::to_string(cols),
                       lines.number, toks.empty() ? 1 : toks.back().column);
    }
    for (const Token& tok : toks) values.push_back(parse_double(tok, lines.number));
    ++rows;
  } while (lines.next());
  if (rows == 0) throw ParseError("no matrix rows found", lines.number, 1);
  return make_matrix(rows, static_cast<Index>(cols), values);
}

bool first_content_line(Lines& lines) {
  while (lines.next()) {
    if (!blank(lines.current)) return true;
  }
  return false;
}

std::ifstream open_in(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open '" + file.string() + "' for reading");
  return in;
}

}  // namespace

Matrix read_matrix(std::istream& in) {
  Lines lines{in};
  if (!first_content_line(lines)) throw ParseError("empty matrix input", 0, 0);
  if (lines.current.rfind("%%MatrixMarket", 0) == 0) return read_matrix_market(lines);
  return read_csv(lines);
}

Matrix read_matrix(const std::filesystem::path& file) {
  std::ifstream in = open_in(file);
  return read_matrix(in);
}

Vector read_vector(std::istream& in) {
  Lines lines{in};
  if (!first_content_line(lines)) throw ParseError("empty vector input", 0, 0);
  if (lines.current.rfind("%%MatrixMarket", 0) == 0) {
    const Matrix A = read_matrix_market(lines);
    if (A.cols() != 1) throw ParseError("vector file must have a single column", 0, 0);
    return A.col(0);
  }
  std::vector<double> values;
  do {
    if (blank(lines.current) || lines.current.front() == '#') continue;
    for (const Token& tok : tokenize(lines.current)) values.push_back(parse_double(tok, lines.number));
  } while (lines.next());
  if (values.empty()) throw ParseError("no vector entries found", lines.number, 1);
  return make_vector(values);
}

Vector read_vector(const std::filesystem::path& file) {
  std::ifstream in = open_in(file);
  return read_vector(in);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_matrix_market(std::ostream& out, const Matrix& A) {
  out << "%%MatrixMarket matrix array real general\n" << A.rows() << ' ' << A.cols() << '\n';
  for (Index j = 0; j < A.cols(); ++j) {
    for (Index i = 0; i < A.rows(); ++i) out << format_double(A(i, j)) << '\n';
  }
}

void write_vector(std::ostream& out, const Vector& v) {
  for (Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
}

// Paths

namespace {

json vector_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

template <class T>
T field(const json& obj, const char* key) {
  if (!obj.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("field '") + key + "' has the wrong type");
  }
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string path_to_json(const PathRecord& path) {
  json doc;
  doc["m"] = path.m;
  doc["n"] = path.n;
  doc["t0"] = path.t0;
  doc["termination"] = to_string(path.termination.kind);
  if (path.termination.kind == TerminationKind::SignInconsistency) {
    doc["inconsistent_index"] = path.termination.index;
    doc["inconsistent_t"] = path.termination.t;
  }
  json kinks = json::array();
  for (const KinkRecord& k : path.kinks) kinks.push_back({{"t", k.t}, {"u", vector_json(k.u)}});
  doc["kinks"] = std::move(kinks);
  return doc.dump(1) + "\n";
}

PathRecord path_from_json(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw FormatError("path document must be a JSON object");
  PathRecord rec;
  rec.m = field<Index>(doc, "m");
  rec.n = field<Index>(doc, "n");
  rec.t0 = field<double>(doc, "t0");
  const auto kind = termination_from_string(field<std::string>(doc, "termination"));
  if (!kind) throw FormatError("unknown termination '" + field<std::string>(doc, "termination") + "'");
  rec.termination.kind = *kind;
  if (*kind == TerminationKind::SignInconsistency) {
    rec.termination.index = doc.contains("inconsistent_index") ? field<Index>(doc, "inconsistent_index") : -1;
    rec.termination.t = doc.contains("inconsistent_t") ? field<double>(doc, "inconsistent_t") : 0.0;
  }
  const json& kinks = doc.contains("kinks") ? doc.at("kinks") : json();
  if (!kinks.is_array()) throw FormatError("'kinks' must be an array");
  for (const json& k : kinks) {
    if (!k.is_object()) throw FormatError("each kink must be an object");
    KinkRecord kr;
    kr.t = field<double>(k, "t");
    const auto u = field<std::vector<double>>(k, "u");
    kr.u = Eigen::Map<const Vector>(u.data(), static_cast<Index>(u.size()));
    rec.kinks.push_back(std::move(kr));
  }
  if (rec.termination.kind != TerminationKind::SignInconsistency && !rec.kinks.empty()) {
    rec.termination.t = rec.kinks.back().t;
  }
  rec.check_structure();
  return rec;
}

void write_path(const std::filesystem::path& file, const PathRecord& path) {
  std::ofstream out(file);
  if (!out) throw Error("cannot open '" + file.string() + "' for writing");
  out << path_to_json(path);
  if (!out) throw Error("failed writing '" + file.string() + "'");
}

PathRecord read_path(const std::filesystem::path& file) {
  std::ifstream in = open_in(file);
  std::stringstream buf;
  buf << in.rdbuf();
  return path_from_json(buf.str());
}

std::string report_to_json(const VerificationReport& report) {
  json doc;
  doc["pass"] = report.pass;
  doc["worst_t"] = report.worst_t;
  doc["seed"] = report.seed;
  json samples = json::array();
  for (const auto& s : report.samples) {
    samples.push_back({{"t", s.t}, {"kkt_residual", s.kkt_residual}, {"objective_gap", s.objective_gap}});
  }
  doc["samples"] = std::move(samples);
  return doc.dump(1) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw FormatError("report document must be a JSON object");
  VerificationReport rep;
  rep.pass = field<bool>(doc, "pass");
  rep.worst_t = field<double>(doc, "worst_t");
  if (doc.contains("seed")) rep.seed = field<std::uint64_t>(doc, "seed");
  const json& samples = doc.contains("samples") ? doc.at("samples") : json();
  if (!samples.is_array()) throw FormatError("'samples' must be an array");
  for (const json& s : samples) {
    rep.samples.push_back({field<double>(s, "t"), field<double>(s, "kkt_residual"), field<double>(s, "objective_gap")});
  }
  return rep;
}

}  // namespace lassopath::io
