#pragma once

// Polytope bias estimation: upper biases alpha such that the frame is
// alpha-rectifying on the unit ball (or its non-negative part), computed
// facet by facet from the polytope of the frame elements.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "relucert/polytope.hpp"

namespace relucert {

enum class Domain { Ball, BallPositive };

const char* to_string(Domain domain) noexcept;

struct BiasEstimate {
  Domain domain = Domain::Ball;
  double radius = 1.0;
  std::uint64_t frame_fingerprint = 0;
  Vector alpha_X;                            // minimal facet correlations
  std::vector<std::optional<double>> alpha_S;  // only where alpha_X < 0
  Vector alpha_B;                            // unit ball; +inf where unconstrained
  Vector alpha_scaled;                       // radius * alpha_B
  std::vector<bool> unconstrained;           // i outside I+ on the positive ball
};

struct StabilityReport {
  double A0 = 0.0;  // certified lower bound over facet sub-frames
  double B0 = 0.0;  // largest eigenvalue of the full frame operator
  double image_radius = 0.0;
};

struct PbeOptions {
  double solver_tol = 1e-9;
  int max_iters = 10000;
};

/// alpha^X_i = min over facets j containing i, and l in I_{F_j}, of
/// <x_l, x_i>. Throws OrphanVertex if some element lies on no facet.
Vector alpha_X(const Polytope& poly);

/// Upper bias on B_r for an omnidirectional frame. alpha_B_i is 0 when
/// alpha^X_i >= 0, otherwise the smallest capped-cone minimum over the
/// facets adjacent to i. Inputs x in B_r satisfy <x, x_i> >= r * alpha_B_i
/// exactly when x / r does so for alpha_B_i, hence alpha_scaled = r * alpha_B.
///
/// Throws NotOmnidirectional, or SolverFailed when a capped-cone solve does
/// not converge.
BiasEstimate pbe_ball(const Polytope& poly, double radius, const PbeOptions& opts = {});

/// Same estimation restricted to the J+ facets of `report`; elements outside
/// I+ are flagged unconstrained and carry +inf. Throws
/// NotNonnegOmnidirectional.
BiasEstimate pbe_positive(const Polytope& poly, const PositiveFacetReport& report, double radius,
                          const PbeOptions& opts = {});

/// A0/B0 bounds for the ReLU frame inequality with alpha = alpha^B, and the
/// image radius r * sqrt(B0). Throws NotOmnidirectional.
StabilityReport stability(const Polytope& poly, double radius);

/// As stability(), with A0 taken over the J+ facets only.
StabilityReport stability_positive(const Polytope& poly, const PositiveFacetReport& report,
                                   double radius);

}  // namespace relucert
