#include "relucert/layer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "relucert/errors.hpp"

namespace relucert {

namespace {
constexpr double kActiveSlack = 1e-12;
constexpr double kVerifyTol = 1e-8;
constexpr double kMarginTol = 1e-12;
}  // namespace

ReLULayer::ReLULayer(UnitFrame frame, Vector bias, double radius, Domain domain)
    : frame_(std::move(frame)), bias_(std::move(bias)), radius_(radius), domain_(domain) {
  if (bias_.size() != frame_.m()) {
    throw Error(ErrorKind::DimensionMismatch, "bias length must equal the number of elements");
  }
  if (!std::all_of(bias_.begin(), bias_.end(), [](double b) { return std::isfinite(b); })) {
    throw Error(ErrorKind::InvalidInput, "non-finite bias");
  }
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw Error(ErrorKind::InvalidInput, "radius must be positive and finite");
  }
}

bool ReLULayer::in_domain(std::span<const double> x) const {
  if (norm(x) > radius_ + 1e-9) return false;
  if (domain_ == Domain::BallPositive) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v >= -1e-12; });
  }
  return true;
}

Vector forward(const ReLULayer& layer, std::span<const double> x) {
  Vector z = analysis(layer.frame(), x);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = std::max(0.0, z[i] - layer.bias()[i]);
  return z;
}

IndexSet active_set(const ReLULayer& layer, std::span<const double> x) {
  const Vector c = analysis(layer.frame(), x);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] >= layer.bias()[i] - kActiveSlack) active.push_back(i);
  return IndexSet(std::move(active));
}

IndexSet active_from_output(std::span<const double> z) {
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i] > 0.0) active.push_back(i);
  return IndexSet(std::move(active));
}

bool rectifying_at(const UnitFrame& frame, std::span<const double> bias,
                   std::span<const double> x) {
  const Vector c = analysis(frame, x);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] >= bias[i]) active.push_back(i);
  return is_frame(frame, IndexSet(std::move(active)));
}

Certificate certify(const ReLULayer& layer, const BiasEstimate& estimate) {
  if (estimate.frame_fingerprint != layer.frame().fingerprint()) {
    throw Error(ErrorKind::FrameMismatch, "bias estimate was computed for a different frame");
  }
  if (estimate.domain != layer.domain()) {
    throw Error(ErrorKind::FrameMismatch, "bias estimate was computed for a different domain");
  }
  Certificate cert;
  cert.domain = layer.domain();
  cert.radius = layer.radius();
  cert.frame_fingerprint = estimate.frame_fingerprint;
  const std::size_t m = layer.frame().m();
  cert.margins.resize(m);
  std::vector<std::size_t> failing;
  for (std::size_t i = 0; i < m; ++i) {
    if (estimate.unconstrained[i]) {
      cert.margins[i] = estimate.alpha_B[i];
      continue;
    }
    cert.margins[i] = layer.radius() * estimate.alpha_B[i] - layer.bias()[i];
    if (cert.margins[i] < -kMarginTol) failing.push_back(i);
  }
  cert.failing = IndexSet(std::move(failing));
  cert.injective = cert.failing.empty();
  return cert;
}

FacetDualBank::FacetDualBank(std::vector<IndexSet> vertex_sets, std::vector<RealMatrix> duals,
                             Vector bias)
    : vertex_sets_(std::move(vertex_sets)), duals_(std::move(duals)), bias_(std::move(bias)) {
  if (vertex_sets_.size() != duals_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one dual matrix per facet");
  }
}

Vector FacetDualBank::apply(std::size_t j, std::span<const double> z) const {
  const IndexSet& verts = vertex_sets_.at(j);
  const RealMatrix& dual = duals_.at(j);
  Vector x(dual.rows(), 0.0);
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const double coeff = z[verts[k]] + bias_[verts[k]];
    for (std::size_t r = 0; r < dual.rows(); ++r) x[r] += coeff * dual(r, k);
  }
  return x;
}

FacetDualBank build_dual_bank(const Polytope& poly, std::span<const double> bias) {
  if (bias.size() != poly.frame().m()) {
    throw Error(ErrorKind::DimensionMismatch, "bias length must equal the number of elements");
  }
  std::vector<IndexSet> sets;
  std::vector<RealMatrix> duals;
  for (std::size_t j = 0; j < poly.facet_count(); ++j) {
    const IndexSet& verts = poly.facet(j).vertices;
    try {
      duals.push_back(dual_synthesis(poly.frame(), verts));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotAFrame) throw;
      throw Error(ErrorKind::NotAFrame, "facet " + std::to_string(j) + " is not a frame");
    }
    sets.push_back(verts);
  }
  return FacetDualBank(std::move(sets), std::move(duals), Vector(bias.begin(), bias.end()));
}

Vector reconstruct(const FacetDualBank& bank, const ReLULayer& layer, std::span<const double> z) {
  if (layer.domain() != Domain::Ball) {
    throw Error(ErrorKind::InvalidInput, "reconstruction is only defined on the ball domain");
  }
  if (z.size() != layer.frame().m()) {
    throw Error(ErrorKind::DimensionMismatch, "output length must equal the number of elements");
  }
  const IndexSet active = active_from_output(z);
  std::vector<std::size_t> order(bank.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> overlap(bank.size());
  for (std::size_t j = 0; j < bank.size(); ++j) overlap[j] = bank.vertices(j).intersection_size(active);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return overlap[a] > overlap[b]; });

  auto verified = [&](std::size_t j, Vector& out) {
    out = bank.apply(j, z);
    return max_abs_diff(forward(layer, out), z) <= kVerifyTol;
  };
  Vector candidate;
  for (std::size_t j : order)
    if (overlap[j] == bank.vertices(j).size() && verified(j, candidate)) return candidate;
  // Boundary fallback: inactive vertices are assumed to sit on their threshold.
  for (std::size_t j : order)
    if (overlap[j] != bank.vertices(j).size() && verified(j, candidate)) return candidate;
  throw Error(ErrorKind::ReconstructionFailed, "no facet left-inverse reproduces the output");
}

}  // namespace relucert
