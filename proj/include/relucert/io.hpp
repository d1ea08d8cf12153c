#pragma once

// Plain-text formats: matrix CSV (no header, ',' separated, '.' decimal) and
// the epoch trace consumed by the monitor:
//
//   epoch <k>
//   <m weight rows, CSV>
//   bias,<b_1>,...,<b_m>
//   epoch <k+1>
//   ...

#include <string>
#include <string_view>
#include <vector>

#include "relucert/linalg.hpp"

namespace relucert {

RealMatrix parse_matrix_csv(std::string_view text);
RealMatrix read_matrix_csv(const std::string& path);

/// A bias file is a single CSV row or a single CSV column.
Vector parse_vector_csv(std::string_view text);
Vector read_vector_csv(const std::string& path);

/// %.17g, so every double survives a text round trip.
std::string format_double(double v);
std::string format_matrix_csv(const RealMatrix& matrix);

struct TraceEpoch {
  long epoch = 0;
  RealMatrix weights;
  Vector bias;
};

/// All epochs must share the same (m, n).
std::vector<TraceEpoch> parse_trace(std::string_view text);
std::vector<TraceEpoch> read_trace(const std::string& path);
std::string format_trace(const std::vector<TraceEpoch>& epochs);

std::string read_text_file(const std::string& path);

}  // namespace relucert
