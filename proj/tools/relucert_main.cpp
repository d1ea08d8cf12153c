// relucert: injectivity certificates and exact inversion for ReLU layers.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "relucert/errors.hpp"
#include "relucert/fixtures.hpp"
#include "relucert/io.hpp"
#include "relucert/pipeline.hpp"

namespace {

using namespace relucert;

enum ExitCode { kOk = 0, kFailure = 1, kParse = 2, kPrecondition = 3, kSolver = 4, kReconstruct = 5 };

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotOmnidirectional:
    case ErrorKind::NotNonnegOmnidirectional:
    case ErrorKind::DegenerateHull:
    case ErrorKind::OrphanVertex:
    case ErrorKind::NotAFrame:
      return kPrecondition;
    case ErrorKind::NotConverged:
    case ErrorKind::SolverFailed:
      return kSolver;
    case ErrorKind::ReconstructionFailed:
      return kReconstruct;
    default:
      return kParse;
  }
}

int report_error(const std::string& kind, const std::string& message, int code) {
  nlohmann::ordered_json err{{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << err.dump() << "\n";
  return code;
}

std::string slurp(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  return read_text_file(path);
}

RealMatrix load_matrix(const std::string& path) {
  const std::string text = slurp(path);
  try {
    return parse_matrix_csv(text);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

Vector load_vector(const std::string& path) {
  const std::string text = slurp(path);
  try {
    return parse_vector_csv(text);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Parse, "cannot write '" + out_path + "'");
  out << text;
}

Domain parse_domain(const std::string& s) {
  if (s == "ball") return Domain::Ball;
  if (s == "ball+") return Domain::BallPositive;
  throw Error(ErrorKind::Parse, "unknown domain '" + s + "' (expected ball or ball+)");
}

struct Common {
  double radius = 1.0;
  std::string domain = "ball";
  double tol = 1e-9;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_domain = true) {
  cmd->add_option("--radius", c.radius, "input ball radius")->check(CLI::PositiveNumber);
  if (with_domain) {
    cmd->add_option("--domain", c.domain, "ball or ball+")->check(CLI::IsMember({"ball", "ball+"}));
  }
  cmd->add_option("--tol", c.tol, "capped-cone solver tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "write output to this path instead of stdout");
}

PipelineOptions options_from(const Common& c) {
  PipelineOptions opts;
  opts.radius = c.radius;
  opts.domain = parse_domain(c.domain);
  opts.pbe.solver_tol = c.tol;
  return opts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polytope bias estimation: injectivity certificates and reconstruction for ReLU layers"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "emit a fixture weight matrix as CSV");
  std::string gen_name;
  std::size_t gen_n = 0, gen_m = 0;
  std::uint64_t gen_seed = 0;
  bool gen_seed_set = false;
  std::string gen_out;
  gen->add_option("name", gen_name, "mercedes | tetrahedron | icosahedron | basis | random-sphere")
      ->required();
  gen->add_option("--n", gen_n, "dimension (basis, random-sphere)");
  gen->add_option("--m", gen_m, "number of rows (random-sphere)");
  gen->add_option("--seed", gen_seed, "RNG seed (random-sphere)")->each([&](const std::string&) {
    gen_seed_set = true;
  });
  gen->add_option("--out", gen_out, "output path");

  // pbe
  auto* pbe = app.add_subcommand("pbe", "estimate upper biases and write a JSON report");
  Common pbe_opts;
  std::string pbe_weights, pbe_bias;
  pbe->add_option("weights", pbe_weights, "weight matrix CSV ('-' for stdin)")->required();
  pbe->add_option("--bias", pbe_bias, "bias CSV; adds an injectivity certificate");
  add_common(pbe, pbe_opts);

  // certify
  auto* cert = app.add_subcommand("certify", "certify a layer's bias against the estimate");
  Common cert_opts;
  std::string cert_weights, cert_bias;
  cert->add_option("weights", cert_weights, "weight matrix CSV")->required();
  cert->add_option("bias", cert_bias, "bias CSV")->required();
  add_common(cert, cert_opts);

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "run inputs through the layer and invert them");
  Common rec_opts;
  std::string rec_weights, rec_bias, rec_inputs;
  bool rec_force = false;
  rec->add_option("weights", rec_weights, "weight matrix CSV")->required();
  rec->add_option("bias", rec_bias, "bias CSV")->required();
  rec->add_option("inputs", rec_inputs, "input vectors, one CSV row each")->required();
  rec->add_flag("--force", rec_force, "proceed without a certificate; failed rows become NaN");
  add_common(rec, rec_opts, false);

  // monitor
  auto* mon = app.add_subcommand("monitor", "per-epoch bias metrics for a training trace");
  Common mon_opts;
  mon_opts.radius = 3.1;
  std::string mon_trace;
  mon->add_option("trace", mon_trace, "trace file")->required();
  add_common(mon, mon_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("Usage", e.what(), kParse);
  }

  try {
    if (*gen) {
      if (gen_name == "basis" && gen_n == 0) throw Error(ErrorKind::InvalidInput, "basis needs --n");
      if (gen_name == "random-sphere" && (gen_n == 0 || gen_m == 0 || !gen_seed_set)) {
        throw Error(ErrorKind::InvalidInput, "random-sphere needs --n, --m and --seed");
      }
      emit(format_matrix_csv(generate_fixture(gen_name, gen_n, gen_m, gen_seed)), gen_out);
    } else if (*pbe || *cert) {
      const Common& c = *pbe ? pbe_opts : cert_opts;
      const auto opts = options_from(c);
      const RealMatrix weights = load_matrix(*pbe ? pbe_weights : cert_weights);
      std::optional<Vector> bias;
      if (*cert) bias = load_vector(cert_bias);
      if (*pbe && !pbe_bias.empty()) bias = load_vector(pbe_bias);
      emit(serialize_report(make_report(run_pbe(weights, bias, opts), opts)), c.out);
    } else if (*rec) {
      const auto opts = options_from(rec_opts);
      const auto run = run_reconstruct(load_matrix(rec_weights), load_vector(rec_bias),
                                       load_matrix(rec_inputs), opts, rec_force);
      if (run.outside_domain > 0) {
        std::cerr << "warning: " << run.outside_domain << " input(s) lie outside the ball of radius "
                  << opts.radius << "\n";
      }
      if (!run.certificate.injective) {
        std::cerr << "warning: layer is not certified injective; results are unverified\n";
      }
      emit(format_reconstruction_csv(run), rec_opts.out);
    } else if (*mon) {
      PbeOptions pbe_o;
      pbe_o.solver_tol = mon_opts.tol;
      const auto trace = read_trace(mon_trace);
      const auto run = monitor(trace, mon_opts.radius, pbe_o);
      for (const auto& line : run.log) std::cerr << "warning: " << line << "\n";
      emit(format_monitor_csv(run), mon_opts.out);
      if (!trace.empty() && run.failed == trace.size()) {
        return report_error("AllEpochsFailed", "no epoch produced a bias estimate", kFailure);
      }
    }
  } catch (const Error& e) {
    return report_error(to_string(e.kind()), e.what(), exit_code_for(e.kind()));
  } catch (const std::exception& e) {
    return report_error("Internal", e.what(), kFailure);
  }
  return kOk;
}
