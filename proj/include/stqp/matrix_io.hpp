#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "stqp/errors.hpp"
#include "stqp/sym_matrix.hpp"

namespace stqp {

// Matrix text format: first line "n", then n rows of n whitespace-separated
// numbers. Numbers are written with 17 significant digits so a write/read
// cycle is exact.

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Text after '#' on any line is a comment.
inline SymMatrix parse_matrix(std::istream& raw) {
  std::string body, line;
  while (std::getline(raw, line)) body += line.substr(0, line.find('#')) + '\n';
  std::istringstream in(body);
  long long n = 0;
  if (!(in >> n) || n <= 0) throw ParseError("matrix: expected a positive dimension on the first line");
  Dense a(n, n);
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j) {
      std::string tok;
      if (!(in >> tok))
        throw ParseError("matrix: expected " + std::to_string(n * n) + " entries, got " +
                         std::to_string(i * n + j));
      try {
        std::size_t used = 0;
        a(i, j) = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("matrix: malformed number '" + tok + "'");
      }
    }
  std::string extra;
  if (in >> extra) throw ParseError("matrix: trailing content '" + extra + "'");
  try {
    return SymMatrix::from_dense(a, 1e-12);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("matrix: ") + e.what());
  }
}

inline SymMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix(in);
}

inline SymMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("matrix: cannot open " + path.string());
  return parse_matrix(in);
}

inline std::string format_matrix(const SymMatrix& m) {
  std::ostringstream out;
  out << m.n() << '\n';
  for (std::size_t i = 0; i < m.n(); ++i) {
    for (std::size_t j = 0; j < m.n(); ++j) out << (j ? " " : "") << format_double(m(i, j));
    out << '\n';
  }
  return out.str();
}

/// Writes through a temporary file and renames it into place.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline void write_matrix(const std::filesystem::path& path, const SymMatrix& m) {
  write_text_atomic(path, format_matrix(m));
}

}  // namespace stqp
