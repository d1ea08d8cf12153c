#pragma once

// The ReLU-layer x -> (max(0, <x, x_i> - alpha_i))_i over a UnitFrame,
// injectivity certificates, and exact inversion through per-facet canonical
// duals.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "relucert/pbe.hpp"

namespace relucert {

class ReLULayer {
 public:
  /// `bias` is the threshold subtracted before the ReLU, already rescaled to
  /// the unit-norm rows of `frame`.
  ReLULayer(UnitFrame frame, Vector bias, double radius = 1.0, Domain domain = Domain::Ball);

  const UnitFrame& frame() const noexcept { return frame_; }
  const Vector& bias() const noexcept { return bias_; }
  double radius() const noexcept { return radius_; }
  Domain domain() const noexcept { return domain_; }

  /// ||x|| <= r (with 1e-9 slack). forward() does not enforce it.
  bool in_domain(std::span<const double> x) const;

 private:
  UnitFrame frame_;
  Vector bias_;
  double radius_;
  Domain domain_;
};

Vector forward(const ReLULayer& layer, std::span<const double> x);

/// I_x = {i : <x, x_i> >= alpha_i}, with 1e-12 slack on the inequality.
IndexSet active_set(const ReLULayer& layer, std::span<const double> x);

/// {i : z_i > 0}. A subset of the true active set: entries sitting exactly on
/// their threshold produce z_i = 0 as well.
IndexSet active_from_output(std::span<const double> z);

/// Whether the active sub-collection at x spans R^n.
bool rectifying_at(const UnitFrame& frame, std::span<const double> bias,
                   std::span<const double> x);

struct Certificate {
  bool injective = false;
  Vector margins;  // radius * alpha_B_i - bias_i; +inf where unconstrained
  IndexSet failing;
  Domain domain = Domain::Ball;
  double radius = 1.0;
  std::uint64_t frame_fingerprint = 0;
};

/// Sufficient test: the layer is certified injective on its ball when every
/// constrained bias sits at or below the scaled estimate. A negative result
/// only means "not certified". The estimate is rescaled to the layer's radius.
/// Throws FrameMismatch when the estimate belongs to another frame or domain.
Certificate certify(const ReLULayer& layer, const BiasEstimate& estimate);

class FacetDualBank {
 public:
  FacetDualBank(std::vector<IndexSet> vertex_sets, std::vector<RealMatrix> duals, Vector bias);

  std::size_t size() const noexcept { return duals_.size(); }
  const IndexSet& vertices(std::size_t j) const { return vertex_sets_.at(j); }
  const RealMatrix& dual(std::size_t j) const { return duals_.at(j); }
  const Vector& bias() const noexcept { return bias_; }

  /// sum_{i in I_{F_j}} (z_i + alpha_i) S_{I_{F_j}}^{-1} x_i
  Vector apply(std::size_t j, std::span<const double> z) const;

 private:
  std::vector<IndexSet> vertex_sets_;
  std::vector<RealMatrix> duals_;
  Vector bias_;
};

/// Canonical dual synthesis matrix for every facet. Throws NotAFrame if a
/// facet sub-collection is rank deficient.
FacetDualBank build_dual_bank(const Polytope& poly, std::span<const double> bias);

/// Inverts z = forward(layer, x). Facets whose vertices are all strictly
/// active are tried first, ordered by decreasing overlap with the active
/// pattern and then by index; remaining facets follow as a fallback for
/// inputs on a threshold. A candidate is returned only once forward() of it
/// reproduces z within 1e-8. Throws ReconstructionFailed otherwise.
Vector reconstruct(const FacetDualBank& bank, const ReLULayer& layer, std::span<const double> z);

}  // namespace relucert
