#pragma once

// Versioned JSON report emitted by the `pbe` and `certify` commands. Keys are
// written in a fixed order, so identical inputs give byte-identical reports.
// Entries equal to +inf (unconstrained biases on the positive ball) are
// written as the string "unconstrained"; alpha_S entries that were not
// computed are null. Indices are 0-based.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relucert/frame.hpp"
#include "relucert/pbe.hpp"

namespace relucert {

struct ReportCertificate {
  bool injective = false;
  Vector margins;
  IndexSet failing;

  friend bool operator==(const ReportCertificate&, const ReportCertificate&) = default;
};

struct Report {
  static constexpr const char* kSchema = "relucert.report/1";

  std::string schema = kSchema;
  std::string tool_version;
  std::string input_fingerprint;
  std::size_t m = 0;
  std::size_t n = 0;
  Domain domain = Domain::Ball;
  double radius = 1.0;
  bool omnidirectional = false;
  std::optional<bool> nonneg_omnidirectional;
  std::vector<IndexSet> facets;
  std::optional<IndexSet> positive_facets;
  Vector alpha_X;
  std::vector<std::optional<double>> alpha_S;
  Vector alpha_B;
  Vector alpha_scaled;
  std::optional<StabilityReport> stability;
  std::optional<ReportCertificate> certificate;
  std::vector<std::pair<std::string, double>> tolerances;

  friend bool operator==(const Report&, const Report&);
};

std::string serialize_report(const Report& report);
/// Throws Parse on malformed documents or an unknown schema.
Report parse_report(std::string_view text);

}  // namespace relucert
