#include "takumlab/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "takumlab/errors.hpp"

namespace takumlab {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(const std::string& id, std::size_t line, const std::string& msg) {
  std::ostringstream os;
  os << "matrix market";
  if (!id.empty()) os << " [" << id << "]";
  os << " line " << line << ": " << msg;
  throw DataError(os.str());
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

long parse_long(const std::string& tok, const std::string& id, std::size_t line) {
  long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    fail(id, line, "expected an integer, got '" + tok + "'");
  return v;
}

ExtendedReal parse_value(std::string tok, const std::string& id, std::size_t line) {
  // Fortran-style exponents appear in a few collection files.
  for (char& c : tok)
    if (c == 'D' || c == 'd') c = 'e';
  double v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    fail(id, line, "expected a numeric value, got '" + tok + "'");
  return ExtendedReal::from_double(v);
}

}  // namespace

std::vector<ExtendedReal> SparseMatrix::values() const {
  std::vector<ExtendedReal> out;
  out.reserve(entries.size());
  for (const Entry& e : entries) out.push_back(e.value);
  return out;
}

ExtendedReal SparseMatrix::max_abs() const {
  ExtendedReal best = ExtendedReal::zero();
  for (const Entry& e : entries) {
    ExtendedReal a = e.value.abs();
    if (best.order(a) < 0) best = a;
  }
  return best;
}

SparseMatrix parse_matrix_market(std::istream& in, const std::string& id) {
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) fail(id, 1, "empty input");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto banner = split_ws(lower(line));
  if (banner.size() < 5 || banner[0] != "%%matrixmarket")
    fail(id, lineno, "missing %%MatrixMarket banner");
  if (banner[1] != "matrix") fail(id, lineno, "unsupported object '" + banner[1] + "'");
  const std::string& layout = banner[2];
  const std::string& field = banner[3];
  const std::string& sym = banner[4];

  if (layout != "coordinate" && layout != "array")
    fail(id, lineno, "unsupported format '" + layout + "'");
  if (field == "complex" || field == "pattern")
    fail(id, lineno, "unsupported field '" + field + "'");
  if (field != "real" && field != "integer")
    fail(id, lineno, "unknown field '" + field + "'");

  SparseMatrix m;
  m.id = id;
  if (sym == "general") m.symmetry = Symmetry::General;
  else if (sym == "symmetric") m.symmetry = Symmetry::Symmetric;
  else if (sym == "skew-symmetric") m.symmetry = Symmetry::Skew;
  else fail(id, lineno, "unsupported symmetry '" + sym + "'");

  // Comments, then the size line.
  std::vector<std::string> size_tokens;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '%') continue;
    size_tokens = split_ws(line);
    if (size_tokens.empty()) continue;
    break;
  }
  if (size_tokens.empty()) fail(id, lineno, "missing size line");

  bool coordinate = layout == "coordinate";
  std::size_t expected = 0;
  if (coordinate) {
    if (size_tokens.size() != 3)
      fail(id, lineno, "coordinate size line needs rows cols nnz");
    m.rows = parse_long(size_tokens[0], id, lineno);
    m.cols = parse_long(size_tokens[1], id, lineno);
    long nnz = parse_long(size_tokens[2], id, lineno);
    if (m.rows <= 0 || m.cols <= 0 || nnz < 0)
      fail(id, lineno, "invalid dimensions");
    expected = static_cast<std::size_t>(nnz);
  } else {
    if (size_tokens.size() != 2) fail(id, lineno, "array size line needs rows cols");
    m.rows = parse_long(size_tokens[0], id, lineno);
    m.cols = parse_long(size_tokens[1], id, lineno);
    if (m.rows <= 0 || m.cols <= 0) fail(id, lineno, "invalid dimensions");
    if (m.symmetry != Symmetry::General && m.rows != m.cols)
      fail(id, lineno, "symmetric array matrix must be square");
    switch (m.symmetry) {
      case Symmetry::General:
        expected = static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(m.cols);
        break;
      case Symmetry::Symmetric:
        expected = static_cast<std::size_t>(m.rows) * (m.rows + 1) / 2;
        break;
      case Symmetry::Skew:
        expected = static_cast<std::size_t>(m.rows) * (m.rows - 1) / 2;
        break;
    }
  }
  m.entries.reserve(expected);

  // Array data runs down the stored columns.
  long arr_row = 1, arr_col = 1;
  if (!coordinate && m.symmetry == Symmetry::Skew) arr_row = 2;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '%') continue;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (m.entries.size() >= expected)
      fail(id, lineno, "more entries than the size line announced");

    if (coordinate) {
      if (tokens.size() != 3) fail(id, lineno, "expected 'row col value'");
      SparseMatrix::Entry e;
      e.row = parse_long(tokens[0], id, lineno);
      e.col = parse_long(tokens[1], id, lineno);
      if (e.row < 1 || e.row > m.rows || e.col < 1 || e.col > m.cols)
        fail(id, lineno, "index out of range");
      e.value = parse_value(tokens[2], id, lineno);
      m.entries.push_back(std::move(e));
    } else {
      for (const std::string& tok : tokens) {
        if (m.entries.size() >= expected)
          fail(id, lineno, "more entries than the size line announced");
        SparseMatrix::Entry e;
        e.row = arr_row;
        e.col = arr_col;
        e.value = parse_value(tok, id, lineno);
        m.entries.push_back(std::move(e));
        ++arr_row;
        if (arr_row > m.rows) {
          ++arr_col;
          switch (m.symmetry) {
            case Symmetry::General: arr_row = 1; break;
            case Symmetry::Symmetric: arr_row = arr_col; break;
            case Symmetry::Skew: arr_row = arr_col + 1; break;
          }
        }
      }
    }
  }
  if (m.entries.size() != expected) {
    std::ostringstream os;
    os << "expected " << expected << " entries, found " << m.entries.size();
    fail(id, lineno, os.str());
  }
  return m;
}

SparseMatrix parse_matrix_market_file(const std::string& path, const std::string& id) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open matrix file: " + path);
  return parse_matrix_market(in, id.empty() ? path : id);
}

}  // namespace takumlab
