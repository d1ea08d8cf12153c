#include "relucert/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "relucert/errors.hpp"

namespace relucert {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return lines;
}

double parse_field(std::string_view raw, std::size_t line_no) {
  const std::string field(trim(raw));
  if (field.empty()) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": empty field");
  }
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::Parse,
                "line " + std::to_string(line_no) + ": not a finite number: '" + field + "'");
  }
  return v;
}

Vector parse_row(std::string_view line, std::size_t line_no) {
  Vector row;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    row.push_back(parse_field(line.substr(start, comma == line.npos ? line.npos : comma - start),
                              line_no));
    if (comma == line.npos) break;
    start = comma + 1;
  }
  return row;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RealMatrix parse_matrix_csv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);  // UTF-8 BOM
  std::vector<Vector> rows;
  const auto lines = split_lines(text);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    if (trim(lines[k]).empty()) continue;
    rows.push_back(parse_row(lines[k], k + 1));
    if (rows.back().size() != rows.front().size()) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(k + 1) + ": expected " +
                                        std::to_string(rows.front().size()) + " fields");
    }
  }
  if (rows.empty()) throw Error(ErrorKind::Parse, "empty matrix");
  return RealMatrix::from_rows(rows);
}

RealMatrix read_matrix_csv(const std::string& path) {
  try {
    return parse_matrix_csv(read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

Vector parse_vector_csv(std::string_view text) {
  const RealMatrix m = parse_matrix_csv(text);
  if (m.rows() == 1) return Vector(m.row(0).begin(), m.row(0).end());
  if (m.cols() == 1) return m.column(0);
  throw Error(ErrorKind::Parse, "expected a single row or a single column");
}

Vector read_vector_csv(const std::string& path) {
  try {
    return parse_vector_csv(read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_matrix_csv(const RealMatrix& matrix) {
  std::string out;
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(matrix(r, c));
    }
    out += '\n';
  }
  return out;
}

std::vector<TraceEpoch> parse_trace(std::string_view text) {
  std::vector<TraceEpoch> epochs;
  std::vector<Vector> rows;
  bool open = false;
  const auto lines = split_lines(text);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto line = trim(lines[k]);
    const std::size_t line_no = k + 1;
    if (line.empty()) continue;
    if (line.starts_with("epoch")) {
      if (open) throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": missing bias row");
      const std::string num(trim(line.substr(5)));
      char* end = nullptr;
      const long id = std::strtol(num.c_str(), &end, 10);
      if (num.empty() || end != num.c_str() + num.size()) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": bad epoch header");
      }
      epochs.push_back(TraceEpoch{id, {}, {}});
      rows.clear();
      open = true;
    } else if (line.starts_with("bias,")) {
      if (!open || rows.empty()) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": bias without weights");
      }
      epochs.back().bias = parse_row(line.substr(5), line_no);
      epochs.back().weights = RealMatrix::from_rows(rows);
      if (epochs.back().bias.size() != rows.size()) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) +
                                          ": bias length differs from weight row count");
      }
      const auto& first = epochs.front().weights;
      if (first.rows() != rows.size() || first.cols() != rows.front().size()) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) +
                                          ": epoch shape differs from the first epoch");
      }
      open = false;
    } else {
      if (!open) throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": row outside an epoch");
      rows.push_back(parse_row(line, line_no));
      if (rows.back().size() != rows.front().size()) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": ragged weight row");
      }
    }
  }
  if (open) throw Error(ErrorKind::Parse, "trace ends inside an epoch");
  if (epochs.empty()) throw Error(ErrorKind::Parse, "trace has no epochs");
  return epochs;
}

std::vector<TraceEpoch> read_trace(const std::string& path) {
  try {
    return parse_trace(read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::string format_trace(const std::vector<TraceEpoch>& epochs) {
  std::string out;
  for (const auto& e : epochs) {
    out += "epoch " + std::to_string(e.epoch) + "\n";
    out += format_matrix_csv(e.weights);
    out += "bias";
    for (double b : e.bias) out += "," + format_double(b);
    out += '\n';
  }
  return out;
}

}  // namespace relucert
