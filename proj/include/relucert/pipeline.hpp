#pragma once

// End-to-end operations behind the command-line tool. Weights and biases are
// given in raw (unnormalised) form: the layer is x -> ReLU(W x - b).

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "relucert/io.hpp"
#include "relucert/layer.hpp"
#include "relucert/report.hpp"

namespace relucert {

inline constexpr const char* kToolVersion = "0.1.0";

struct PipelineOptions {
  double radius = 1.0;
  Domain domain = Domain::Ball;
  PbeOptions pbe;
  GeometryTolerances geometry;
};

struct PbeRun {
  NormalizedLayer normalized;
  Polytope polytope;
  std::optional<PositiveFacetReport> positive;
  BiasEstimate estimate;
  StabilityReport stability;
  std::optional<Certificate> certificate;
};

/// normalize -> build_polytope -> (omnidirectional | positive facets) ->
/// pbe -> stability -> certify (when a bias is given).
PbeRun run_pbe(const RealMatrix& weights, const std::optional<Vector>& bias,
               const PipelineOptions& opts);

Report make_report(const PbeRun& run, const PipelineOptions& opts);

struct ReconstructionRow {
  Vector input;
  Vector output;         // raw layer output ReLU(W x - b)
  Vector reconstructed;  // NaN-filled when reconstruction failed
  double error = 0.0;    // max-norm roundtrip error
  bool ok = false;
};

struct ReconstructRun {
  Certificate certificate;
  std::vector<ReconstructionRow> rows;
  std::size_t failures = 0;
  std::size_t outside_domain = 0;
};

/// Certifies the layer on the ball, then maps every input row forward and
/// back. Without `force`, an uncertified layer or any failed row throws
/// ReconstructionFailed.
ReconstructRun run_reconstruct(const RealMatrix& weights, const Vector& bias,
                               const RealMatrix& inputs, const PipelineOptions& opts, bool force);

std::string format_reconstruction_csv(const ReconstructRun& run);

struct MonitorRow {
  long epoch = 0;
  double mean_bias = 0.0;   // mean rescaled bias
  double mean_alpha = 0.0;  // mean of radius * alpha_B over constrained entries
  double proportion = 0.0;  // #(rescaled bias_i <= radius * alpha_B_i) / m
  bool omnidirectional = false;
};

struct MonitorRun {
  std::vector<MonitorRow> rows;
  std::vector<std::string> log;  // one message per failed epoch
  std::size_t failed = 0;
};

/// Bias-estimation metrics per epoch of a training trace. Epochs whose frame
/// is not omnidirectional are reported with NaN metrics and counted as
/// failed; epochs that cannot be processed at all are logged and skipped.
MonitorRun monitor(const std::vector<TraceEpoch>& trace, double radius,
                   const PbeOptions& opts = {});

std::string format_monitor_csv(const MonitorRun& run);

}  // namespace relucert
