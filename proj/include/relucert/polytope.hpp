#pragma once

// Convex polytope P_X spanned by the elements of a UnitFrame, its facets and
// vertex-facet incidences, plus the cone-covering queries the bias estimation
// relies on.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "relucert/frame.hpp"
#include "relucert/linalg.hpp"

namespace relucert {

struct GeometryTolerances {
  double plane = 1e-9;     // vertex-on-hyperplane test
  double interior = 1e-9;  // facet offset must exceed this for 0 to be interior
  double distinct = 1e-10; // minimum pairwise distance between elements
  std::size_t coverage_samples = 10000;
};

/// A facet {x in P : <normal, x> = offset} with unit outward normal.
struct Facet {
  IndexSet vertices;
  Vector normal;
  double offset = 0.0;
};

class Polytope {
 public:
  Polytope(UnitFrame frame, std::vector<Facet> facets, bool full_dimensional,
           GeometryTolerances tol);

  const UnitFrame& frame() const noexcept { return frame_; }
  const std::vector<Facet>& facets() const noexcept { return facets_; }
  const Facet& facet(std::size_t j) const { return facets_.at(j); }
  std::size_t facet_count() const noexcept { return facets_.size(); }
  bool full_dimensional() const noexcept { return full_dimensional_; }
  const GeometryTolerances& tolerances() const noexcept { return tol_; }

  /// V_X[j][i] = 1 iff element i is a vertex of facet j (J x m).
  const std::vector<std::vector<std::uint8_t>>& incidence() const noexcept { return incidence_; }

  /// Indices of the facets containing element i, ascending.
  const std::vector<std::size_t>& facets_of(std::size_t i) const { return adjacency_.at(i); }

 private:
  UnitFrame frame_;
  std::vector<Facet> facets_;
  bool full_dimensional_;
  GeometryTolerances tol_;
  std::vector<std::vector<std::uint8_t>> incidence_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Incremental beneath-beyond hull in R^n producing simplicial facets, then
/// merging those whose on-plane vertex sets coincide. Facets are ordered
/// lexicographically by vertex set.
///
/// When the elements only span an affine hyperplane that misses the origin,
/// the result is the single facet holding every element and
/// full_dimensional() is false. Lower-dimensional spans, or a hyperplane
/// through the origin, throw DegenerateHull. Duplicate elements throw
/// InvalidInput.
Polytope build_polytope(const UnitFrame& frame, const GeometryTolerances& tol = {});

/// 0 lies strictly inside P_X.
bool is_omnidirectional(const Polytope& poly);

struct PositiveFacetReport {
  IndexSet facets;    // J+: facets meeting the closed non-negative orthant
  IndexSet vertices;  // I+: union of their vertex sets
  bool nonneg_omnidirectional = false;
};

/// J+ is decided per facet by LP feasibility of {c >= 0, sum c = 1, D c >= 0}.
/// Non-negative omnidirectionality additionally requires every direction of a
/// deterministic positive-octant grid to lie in some cone(F_j), j in J+, and
/// every J+ facet to keep the origin off its hyperplane.
PositiveFacetReport positive_facets(const Polytope& poly);

/// x in cone(F_j), i.e. x = sum_{i in I_F} c_i x_i with c >= -tol.
bool facet_cone_contains(const Polytope& poly, std::size_t j, std::span<const double> x,
                         double tol = 1e-9);

/// Facet through which the ray {t x : t > 0} leaves P_X: the minimiser of
/// offset_j / <normal_j, x> over facets facing x, lowest index on ties.
/// Throws AtOrigin for ||x|| <= 1e-12 and NotOmnidirectional when 0 is not
/// interior.
std::size_t covering_facet(const Polytope& poly, std::span<const double> x);

/// Deterministic, roughly uniform unit directions in the closed non-negative
/// orthant of R^n; includes the coordinate axes and the diagonal.
std::vector<Vector> positive_octant_directions(std::size_t n, std::size_t count);

}  // namespace relucert
