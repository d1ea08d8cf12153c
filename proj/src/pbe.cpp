#include "relucert/pbe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relucert/conic.hpp"
#include "relucert/errors.hpp"

namespace relucert {

const char* to_string(Domain domain) noexcept {
  return domain == Domain::Ball ? "ball" : "ball+";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_radius(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::InvalidInput, "radius must be positive and finite");
  }
}

std::vector<std::size_t> adjacent_facets(const Polytope& poly, std::size_t i,
                                         const std::vector<char>& usable) {
  std::vector<std::size_t> out;
  for (std::size_t j : poly.facets_of(i))
    if (usable[j]) out.push_back(j);
  return out;
}

double min_facet_correlation(const Polytope& poly, std::size_t i,
                             const std::vector<std::size_t>& facets) {
  const UnitFrame& frame = poly.frame();
  double best = kInf;
  for (std::size_t j : facets)
    for (std::size_t l : poly.facet(j).vertices)
      best = std::min(best, dot(frame.element(l), frame.element(i)));
  return best;
}

BiasEstimate estimate(const Polytope& poly, const std::vector<char>& usable, Domain domain,
                      double radius, const PbeOptions& opts) {
  const UnitFrame& frame = poly.frame();
  const std::size_t m = frame.m();
  BiasEstimate est;
  est.domain = domain;
  est.radius = radius;
  est.frame_fingerprint = frame.fingerprint();
  est.alpha_X.assign(m, kInf);
  est.alpha_S.assign(m, std::nullopt);
  est.alpha_B.assign(m, kInf);
  est.alpha_scaled.assign(m, kInf);
  est.unconstrained.assign(m, false);

  for (std::size_t i = 0; i < m; ++i) {
    const auto facets = adjacent_facets(poly, i, usable);
    if (facets.empty()) {
      if (domain == Domain::Ball) {
        throw Error(ErrorKind::OrphanVertex, "element " + std::to_string(i) + " lies on no facet");
      }
      est.unconstrained[i] = true;
      continue;
    }
    const double ax = min_facet_correlation(poly, i, facets);
    est.alpha_X[i] = ax;
    if (ax >= 0.0) {
      est.alpha_B[i] = 0.0;
    } else {
      double as = kInf;
      for (std::size_t j : facets) {
        CappedConeProblem problem;
        problem.D = synthesis_matrix(frame, poly.facet(j).vertices);
        problem.c = problem.D.multiply_transposed(frame.element(i));
        problem.tol = opts.solver_tol;
        problem.max_iters = opts.max_iters;
        // Facets without a negative correlation cannot host the minimum.
        if (*std::min_element(problem.c.begin(), problem.c.end()) >= 0.0) continue;
        try {
          as = std::min(as, min_linear_capped_cone(problem).value);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NotConverged) throw;
          throw SolverFailedError(i, j, e.what());
        }
      }
      est.alpha_S[i] = as;
      est.alpha_B[i] = as;
    }
    est.alpha_scaled[i] = radius * est.alpha_B[i];
  }
  return est;
}

}  // namespace

Vector alpha_X(const Polytope& poly) {
  const std::vector<char> all(poly.facet_count(), 1);
  Vector out(poly.frame().m());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto facets = adjacent_facets(poly, i, all);
    if (facets.empty()) {
      throw Error(ErrorKind::OrphanVertex, "element " + std::to_string(i) + " lies on no facet");
    }
    out[i] = min_facet_correlation(poly, i, facets);
  }
  return out;
}

BiasEstimate pbe_ball(const Polytope& poly, double radius, const PbeOptions& opts) {
  check_radius(radius);
  if (!is_omnidirectional(poly)) {
    throw Error(ErrorKind::NotOmnidirectional, "the origin is not interior to the frame polytope");
  }
  return estimate(poly, std::vector<char>(poly.facet_count(), 1), Domain::Ball, radius, opts);
}

BiasEstimate pbe_positive(const Polytope& poly, const PositiveFacetReport& report, double radius,
                          const PbeOptions& opts) {
  check_radius(radius);
  if (!report.nonneg_omnidirectional) {
    throw Error(ErrorKind::NotNonnegOmnidirectional,
                "the positive-orthant facets do not cover the non-negative orthant");
  }
  std::vector<char> usable(poly.facet_count(), 0);
  for (std::size_t j : report.facets) usable.at(j) = 1;
  return estimate(poly, usable, Domain::BallPositive, radius, opts);
}

namespace {

StabilityReport stability_over(const Polytope& poly, const std::vector<std::size_t>& facets,
                               double radius) {
  check_radius(radius);
  const UnitFrame& frame = poly.frame();
  StabilityReport out;
  out.A0 = kInf;
  for (std::size_t j : facets) {
    out.A0 = std::min(out.A0, frame_bounds(frame, poly.facet(j).vertices).lower);
  }
  const auto eig = jacobi_eigen(frame_operator(frame, IndexSet::range(frame.m())));
  out.B0 = eig.values.back();
  out.image_radius = radius * std::sqrt(out.B0);
  return out;
}

}  // namespace

StabilityReport stability(const Polytope& poly, double radius) {
  if (!is_omnidirectional(poly)) {
    throw Error(ErrorKind::NotOmnidirectional, "the origin is not interior to the frame polytope");
  }
  std::vector<std::size_t> all(poly.facet_count());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  return stability_over(poly, all, radius);
}

StabilityReport stability_positive(const Polytope& poly, const PositiveFacetReport& report,
                                   double radius) {
  if (!report.nonneg_omnidirectional) {
    throw Error(ErrorKind::NotNonnegOmnidirectional,
                "the positive-orthant facets do not cover the non-negative orthant");
  }
  return stability_over(poly, report.facets.values(), radius);
}

}  // namespace relucert
