#pragma once

#include <dimred/error.hpp>
#include <dimred/matrix.hpp>

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace dimred {

/// Shortest decimal text that parses back to exactly the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw Error(Errc::Io, "failed to format number");
  return std::string(buf, ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
    throw Error(Errc::BadCsv,
                "line " + std::to_string(line) + ": '" + std::string(token) + "' is not a number");
  }
  if (!std::isfinite(v)) {
    throw Error(Errc::NonFinite, "line " + std::to_string(line) + ": non-finite value");
  }
  return v;
}

} // namespace detail

//
// CSV matrix: one line per row, comma separated, no header. Accepts LF or
// CRLF line endings and an optional trailing newline.
//
inline Matrix read_csv_matrix(std::string_view text) {
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t line_no = 0;

  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (detail::trim(line).empty()) {
      // blank lines are only tolerated at the end
      if (detail::trim(text).empty()) break;
      throw Error(Errc::BadCsv, "line " + std::to_string(line_no) + " is empty");
    }

    std::size_t count = 0;
    while (true) {
      const auto comma = line.find(',');
      data.push_back(detail::parse_double(line.substr(0, comma), line_no));
      ++count;
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw Error(Errc::BadCsv, "line " + std::to_string(line_no) + " has " +
                                    std::to_string(count) + " fields, expected " +
                                    std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0) throw Error(Errc::BadCsv, "no rows");
  return Matrix(rows, cols, std::move(data));
}

inline std::string write_csv_matrix(const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

} // namespace dimred
