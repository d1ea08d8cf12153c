#include "relucert/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "relucert/errors.hpp"

namespace relucert {

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

constexpr double kMonitorSlack = 1e-12;

}  // namespace

PbeRun run_pbe(const RealMatrix& weights, const std::optional<Vector>& bias,
               const PipelineOptions& opts) {
  const Vector raw_bias = bias ? *bias : Vector(weights.rows(), 0.0);
  NormalizedLayer normalized = normalize(weights, raw_bias);
  Polytope poly = build_polytope(normalized.frame, opts.geometry);

  std::optional<PositiveFacetReport> positive;
  BiasEstimate estimate;
  StabilityReport stab;
  if (opts.domain == Domain::Ball) {
    estimate = pbe_ball(poly, opts.radius, opts.pbe);
    stab = stability(poly, opts.radius);
  } else {
    positive = positive_facets(poly);
    estimate = pbe_positive(poly, *positive, opts.radius, opts.pbe);
    stab = stability_positive(poly, *positive, opts.radius);
  }

  std::optional<Certificate> cert;
  if (bias) {
    const ReLULayer layer(normalized.frame, normalized.rescaled_bias, opts.radius, opts.domain);
    cert = certify(layer, estimate);
  }
  return PbeRun{std::move(normalized), std::move(poly), std::move(positive),
                std::move(estimate), stab, std::move(cert)};
}

Report make_report(const PbeRun& run, const PipelineOptions& opts) {
  Report r;
  r.tool_version = kToolVersion;
  r.input_fingerprint = hex64(run.normalized.frame.fingerprint());
  r.m = run.normalized.frame.m();
  r.n = run.normalized.frame.n();
  r.domain = opts.domain;
  r.radius = opts.radius;
  r.omnidirectional = is_omnidirectional(run.polytope);
  if (run.positive) {
    r.nonneg_omnidirectional = run.positive->nonneg_omnidirectional;
    r.positive_facets = run.positive->facets;
  }
  for (const auto& f : run.polytope.facets()) r.facets.push_back(f.vertices);
  r.alpha_X = run.estimate.alpha_X;
  r.alpha_S = run.estimate.alpha_S;
  r.alpha_B = run.estimate.alpha_B;
  r.alpha_scaled = run.estimate.alpha_scaled;
  r.stability = run.stability;
  if (run.certificate) {
    r.certificate = ReportCertificate{run.certificate->injective, run.certificate->margins,
                                      run.certificate->failing};
  }
  const auto& g = opts.geometry;
  r.tolerances = {{"unit", kTolUnit},
                  {"zero_row", kTolZero},
                  {"rank", kTolRank},
                  {"plane", g.plane},
                  {"interior", g.interior},
                  {"distinct", g.distinct},
                  {"coverage_samples", double(g.coverage_samples)},
                  {"solver", opts.pbe.solver_tol},
                  {"certify_margin", 1e-12},
                  {"reconstruct_verify", 1e-8}};
  return r;
}

ReconstructRun run_reconstruct(const RealMatrix& weights, const Vector& bias,
                               const RealMatrix& inputs, const PipelineOptions& opts, bool force) {
  if (opts.domain != Domain::Ball) {
    throw Error(ErrorKind::InvalidInput, "reconstruction is only defined on the ball domain");
  }
  const PbeRun run = run_pbe(weights, bias, opts);
  ReconstructRun out;
  out.certificate = *run.certificate;
  if (!out.certificate.injective && !force) {
    throw Error(ErrorKind::ReconstructionFailed,
                "layer is not certified injective on the ball (use --force to try anyway)");
  }
  if (inputs.cols() != weights.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "input rows must have n entries");
  }
  const ReLULayer layer(run.normalized.frame, run.normalized.rescaled_bias, opts.radius);
  const FacetDualBank bank = build_dual_bank(run.polytope, run.normalized.rescaled_bias);
  const Vector& norms = run.normalized.norms;

  for (std::size_t r = 0; r < inputs.rows(); ++r) {
    ReconstructionRow row;
    row.input.assign(inputs.row(r).begin(), inputs.row(r).end());
    if (!layer.in_domain(row.input)) ++out.outside_domain;
    Vector z = forward(layer, row.input);
    row.output.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) row.output[i] = z[i] * norms[i];
    try {
      row.reconstructed = reconstruct(bank, layer, z);
      row.error = max_abs_diff(row.reconstructed, row.input);
      row.ok = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ReconstructionFailed || !force) throw;
      row.reconstructed.assign(row.input.size(), std::numeric_limits<double>::quiet_NaN());
      row.error = std::numeric_limits<double>::quiet_NaN();
      ++out.failures;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string format_reconstruction_csv(const ReconstructRun& run) {
  std::string out;
  if (run.rows.empty()) return out;
  const std::size_t m = run.rows.front().output.size();
  const std::size_t n = run.rows.front().input.size();
  for (std::size_t i = 0; i < m; ++i) out += "z" + std::to_string(i) + ",";
  for (std::size_t k = 0; k < n; ++k) out += "x" + std::to_string(k) + ",";
  out += "error\n";
  for (const auto& row : run.rows) {
    for (double v : row.output) out += format_double(v) + ",";
    for (double v : row.reconstructed) out += format_double(v) + ",";
    out += format_double(row.error) + "\n";
  }
  return out;
}

MonitorRun monitor(const std::vector<TraceEpoch>& trace, double radius, const PbeOptions& opts) {
  MonitorRun out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& epoch : trace) {
    try {
      const NormalizedLayer normalized = normalize(epoch.weights, epoch.bias);
      const std::size_t m = normalized.frame.m();
      MonitorRow row;
      row.epoch = epoch.epoch;
      double sum_bias = 0.0;
      for (double b : normalized.rescaled_bias) sum_bias += b;
      row.mean_bias = sum_bias / double(m);

      const Polytope poly = build_polytope(normalized.frame);
      row.omnidirectional = is_omnidirectional(poly);
      if (!row.omnidirectional) {
        row.mean_alpha = nan;
        row.proportion = nan;
        out.log.push_back("epoch " + std::to_string(epoch.epoch) + ": not omnidirectional");
        ++out.failed;
        out.rows.push_back(row);
        continue;
      }
      const BiasEstimate est = pbe_ball(poly, radius, opts);
      double sum_alpha = 0.0;
      std::size_t below = 0;
      for (std::size_t i = 0; i < m; ++i) {
        sum_alpha += est.alpha_scaled[i];
        if (normalized.rescaled_bias[i] <= est.alpha_scaled[i] + kMonitorSlack) ++below;
      }
      row.mean_alpha = sum_alpha / double(m);
      row.proportion = double(below) / double(m);
      out.rows.push_back(row);
    } catch (const Error& e) {
      out.log.push_back("epoch " + std::to_string(epoch.epoch) + ": " + to_string(e.kind()) +
                        ": " + e.what());
      ++out.failed;
    }
  }
  return out;
}

std::string format_monitor_csv(const MonitorRun& run) {
  std::string out = "epoch,mean_bias,mean_alpha_scaled,proportion,omnidirectional\n";
  for (const auto& row : run.rows) {
    out += std::to_string(row.epoch) + "," + format_double(row.mean_bias) + "," +
           format_double(row.mean_alpha) + "," + format_double(row.proportion) + "," +
           (row.omnidirectional ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace relucert
