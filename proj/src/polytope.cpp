#include "relucert/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "relucert/conic.hpp"
#include "relucert/errors.hpp"

namespace relucert {

Polytope::Polytope(UnitFrame frame, std::vector<Facet> facets, bool full_dimensional,
                   GeometryTolerances tol)
    : frame_(std::move(frame)),
      facets_(std::move(facets)),
      full_dimensional_(full_dimensional),
      tol_(tol),
      adjacency_(frame_.m()) {
  incidence_.assign(facets_.size(), std::vector<std::uint8_t>(frame_.m(), 0));
  for (std::size_t j = 0; j < facets_.size(); ++j) {
    for (std::size_t i : facets_[j].vertices) {
      incidence_[j][i] = 1;
      adjacency_[i].push_back(j);
    }
  }
}

namespace {

struct WorkFacet {
  std::vector<std::size_t> vertices;  // exactly n, sorted
  Vector normal;
  double offset = 0.0;
  bool alive = true;
};

RealMatrix gather_rows(const RealMatrix& points, const std::vector<std::size_t>& idx) {
  RealMatrix out(idx.size(), points.cols());
  for (std::size_t r = 0; r < idx.size(); ++r)
    std::copy(points.row(idx[r]).begin(), points.row(idx[r]).end(), out.row(r).begin());
  return out;
}

WorkFacet make_facet(const RealMatrix& points, std::vector<std::size_t> vertices,
                     std::span<const double> interior) {
  std::sort(vertices.begin(), vertices.end());
  auto normal = hyperplane_normal(gather_rows(points, vertices));
  if (!normal) throw Error(ErrorKind::DegenerateHull, "numerically flat hull facet");
  WorkFacet f{std::move(vertices), std::move(*normal), 0.0, true};
  f.offset = dot(f.normal, points.row(f.vertices.front()));
  if (dot(f.normal, interior) > f.offset) {
    for (double& v : f.normal) v = -v;
    f.offset = -f.offset;
  }
  return f;
}

// Greedy selection of affinely independent points: each step takes the point
// farthest from the affine span of those already chosen.
std::vector<std::size_t> affine_basis(const RealMatrix& points, double tol) {
  const std::size_t m = points.rows(), n = points.cols();
  std::vector<std::size_t> chosen{0};
  std::vector<Vector> basis;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = m;
    double best_dist = tol;
    for (std::size_t i = 0; i < m; ++i) {
      Vector d(n);
      for (std::size_t c = 0; c < n; ++c) d[c] = points(i, c) - points(chosen.front(), c);
      for (const auto& b : basis) {
        const double proj = dot(d, b);
        for (std::size_t c = 0; c < n; ++c) d[c] -= proj * b[c];
      }
      const double dist = norm(d);
      if (dist > best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    if (best == m) break;
    Vector d(n);
    for (std::size_t c = 0; c < n; ++c) d[c] = points(best, c) - points(chosen.front(), c);
    for (const auto& b : basis) {
      const double proj = dot(d, b);
      for (std::size_t c = 0; c < n; ++c) d[c] -= proj * b[c];
    }
    const double len = norm(d);
    for (double& v : d) v /= len;
    basis.push_back(std::move(d));
    chosen.push_back(best);
  }
  return chosen;
}

std::vector<Facet> incremental_hull(const RealMatrix& points, const std::vector<std::size_t>& simplex,
                                    const GeometryTolerances& tol) {
  const std::size_t m = points.rows(), n = points.cols();
  Vector interior(n, 0.0);
  for (std::size_t i : simplex)
    for (std::size_t c = 0; c < n; ++c) interior[c] += points(i, c) / double(simplex.size());

  std::vector<WorkFacet> work;
  for (std::size_t skip = 0; skip < simplex.size(); ++skip) {
    std::vector<std::size_t> verts;
    for (std::size_t k = 0; k < simplex.size(); ++k)
      if (k != skip) verts.push_back(simplex[k]);
    work.push_back(make_facet(points, std::move(verts), interior));
  }

  std::vector<char> in_simplex(m, 0);
  for (std::size_t i : simplex) in_simplex[i] = 1;

  for (std::size_t p = 0; p < m; ++p) {
    if (in_simplex[p]) continue;
    const auto x = points.row(p);
    std::map<std::vector<std::size_t>, int> ridges;
    bool any_visible = false;
    for (auto& f : work) {
      if (!f.alive || dot(f.normal, x) - f.offset <= tol.plane) continue;
      any_visible = true;
      f.alive = false;
      for (std::size_t skip = 0; skip < f.vertices.size(); ++skip) {
        std::vector<std::size_t> ridge;
        for (std::size_t k = 0; k < f.vertices.size(); ++k)
          if (k != skip) ridge.push_back(f.vertices[k]);
        ++ridges[ridge];
      }
    }
    if (!any_visible) continue;
    for (auto& [ridge, count] : ridges) {
      if (count != 1) continue;  // shared by two visible facets: interior ridge
      std::vector<std::size_t> verts = ridge;
      verts.push_back(p);
      work.push_back(make_facet(points, std::move(verts), interior));
    }
    std::erase_if(work, [](const WorkFacet& f) { return !f.alive; });
  }

  // Coplanar simplicial facets share the same on-plane vertex set.
  std::map<std::vector<std::size_t>, Facet> merged;
  for (const auto& f : work) {
    std::vector<std::size_t> on_plane;
    for (std::size_t i = 0; i < m; ++i)
      if (std::abs(dot(f.normal, points.row(i)) - f.offset) <= tol.plane) on_plane.push_back(i);
    merged.try_emplace(on_plane, Facet{IndexSet(on_plane), f.normal, f.offset});
  }
  std::vector<Facet> facets;
  facets.reserve(merged.size());
  for (auto& [key, facet] : merged) facets.push_back(std::move(facet));
  return facets;
}

}  // namespace

Polytope build_polytope(const UnitFrame& frame, const GeometryTolerances& tol) {
  const RealMatrix& points = frame.elements();
  const std::size_t m = frame.m(), n = frame.n();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = i + 1; k < m; ++k) {
      double dist2 = 0.0;
      for (std::size_t c = 0; c < n; ++c) dist2 += std::pow(points(i, c) - points(k, c), 2);
      if (std::sqrt(dist2) <= tol.distinct) {
        throw Error(ErrorKind::InvalidInput, "frame elements " + std::to_string(i) + " and " +
                                                 std::to_string(k) + " coincide");
      }
    }
  }

  const auto simplex = affine_basis(points, tol.distinct);
  const std::size_t affine_dim = simplex.size() - 1;
  if (affine_dim == n) {
    return Polytope(frame, incremental_hull(points, simplex, tol), true, tol);
  }
  if (affine_dim + 1 < n) {
    throw Error(ErrorKind::DegenerateHull, "elements span an affine space of dimension " +
                                               std::to_string(affine_dim) + " < n-1");
  }
  auto normal = hyperplane_normal(gather_rows(points, simplex));
  if (!normal) throw Error(ErrorKind::DegenerateHull, "cannot fit supporting hyperplane");
  double offset = dot(*normal, points.row(simplex.front()));
  if (std::abs(offset) <= tol.interior) {
    throw Error(ErrorKind::DegenerateHull, "elements lie on a hyperplane through the origin");
  }
  if (offset < 0) {
    for (double& v : *normal) v = -v;
    offset = -offset;
  }
  std::vector<Facet> single{Facet{IndexSet::range(m), std::move(*normal), offset}};
  return Polytope(frame, std::move(single), false, tol);
}

bool is_omnidirectional(const Polytope& poly) {
  if (!poly.full_dimensional()) return false;
  return std::all_of(poly.facets().begin(), poly.facets().end(), [&](const Facet& f) {
    return f.offset > poly.tolerances().interior;
  });
}

bool facet_cone_contains(const Polytope& poly, std::size_t j, std::span<const double> x,
                         double tol) {
  const Facet& f = poly.facet(j);
  const UnitFrame& frame = poly.frame();
  if (f.offset > poly.tolerances().interior &&
      dot(f.normal, x) <= 0.0 && norm(x) > 1e-12) {
    return false;
  }
  const RealMatrix d = synthesis_matrix(frame, f.vertices);
  if (f.vertices.size() == frame.n()) {
    if (auto c = solve_square(d, Vector(x.begin(), x.end()), 1e-12)) {
      return std::all_of(c->begin(), c->end(), [&](double v) { return v >= -tol; });
    }
  }
  return lp_feasible(d, x, true, RealMatrix(), {}, tol);
}

PositiveFacetReport positive_facets(const Polytope& poly) {
  const UnitFrame& frame = poly.frame();
  const std::size_t n = frame.n();
  std::vector<std::size_t> jplus;
  IndexSet iplus;
  for (std::size_t j = 0; j < poly.facet_count(); ++j) {
    const Facet& f = poly.facet(j);
    const RealMatrix d = synthesis_matrix(frame, f.vertices);
    const RealMatrix simplex_row(1, f.vertices.size(), 1.0);
    const Vector one{1.0};
    const Vector zeros(n, 0.0);
    if (lp_feasible(simplex_row, one, true, d, zeros)) {
      jplus.push_back(j);
      iplus = iplus.united(f.vertices);
    }
  }

  PositiveFacetReport report{IndexSet(jplus), std::move(iplus), false};
  if (report.facets.empty()) return report;
  for (std::size_t j : report.facets) {
    if (std::abs(poly.facet(j).offset) <= poly.tolerances().interior) return report;
  }
  std::size_t last_hit = report.facets[0];
  for (const Vector& dir : positive_octant_directions(n, poly.tolerances().coverage_samples)) {
    if (facet_cone_contains(poly, last_hit, dir)) continue;
    bool covered = false;
    for (std::size_t j : report.facets) {
      if (j != last_hit && facet_cone_contains(poly, j, dir)) {
        covered = true;
        last_hit = j;
        break;
      }
    }
    if (!covered) return report;
  }
  report.nonneg_omnidirectional = true;
  return report;
}

std::size_t covering_facet(const Polytope& poly, std::span<const double> x) {
  if (x.size() != poly.frame().n()) {
    throw Error(ErrorKind::DimensionMismatch, "covering_facet: length != n");
  }
  const double len = norm(x);
  if (len <= 1e-12) throw Error(ErrorKind::AtOrigin, "covering_facet: x is the origin");
  if (!is_omnidirectional(poly)) {
    throw Error(ErrorKind::NotOmnidirectional, "covering_facet needs 0 inside the polytope");
  }
  const double facing_tol = poly.tolerances().interior * len;
  std::size_t best = poly.facet_count();
  double best_t = 0.0;
  for (std::size_t j = 0; j < poly.facet_count(); ++j) {
    const Facet& f = poly.facet(j);
    const double proj = dot(f.normal, x);
    if (proj <= facing_tol) continue;
    const double t = f.offset / proj;
    if (best == poly.facet_count() || t < best_t - 1e-12) {
      best = j;
      best_t = t;
    }
  }
  if (best == poly.facet_count()) {
    throw Error(ErrorKind::NotOmnidirectional, "covering_facet: no facet faces x");
  }
  return best;
}

namespace {

double radical_inverse(std::size_t index, std::size_t base) {
  double inv = 1.0 / double(base), f = inv, r = 0.0;
  while (index > 0) {
    r += f * double(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

constexpr std::size_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                   59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113};

}  // namespace

std::vector<Vector> positive_octant_directions(std::size_t n, std::size_t count) {
  std::vector<Vector> dirs;
  if (n == 0) return dirs;
  for (std::size_t k = 0; k < n; ++k) {
    Vector e(n, 0.0);
    e[k] = 1.0;
    dirs.push_back(std::move(e));
  }
  dirs.emplace_back(n, 1.0 / std::sqrt(double(n)));
  if (n == 1) return dirs;

  if (n == 2) {
    for (std::size_t k = 0; k < count; ++k) {
      const double theta = 0.5 * std::numbers::pi * double(k) / double(count - 1);
      dirs.push_back({std::cos(theta), std::sin(theta)});
    }
    return dirs;
  }
  if (n == 3) {
    // Fibonacci lattice on the whole sphere, keeping the first octant.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t total = 8 * count + 64;; total *= 2) {
      std::vector<Vector> found;
      for (std::size_t k = 0; k < total; ++k) {
        const double z = 1.0 - (2.0 * double(k) + 1.0) / double(total);
        const double rad = std::sqrt(1.0 - z * z);
        const double phi = golden * double(k);
        const double x = rad * std::cos(phi), y = rad * std::sin(phi);
        if (x >= 0 && y >= 0 && z >= 0) found.push_back({x, y, z});
      }
      if (found.size() >= count) {
        dirs.insert(dirs.end(), found.begin(), found.end());
        return dirs;
      }
    }
  }
  // Halton points pushed through Box-Muller give Gaussian vectors; their
  // absolute values, normalised, are spread over the orthant.
  const std::size_t dims = n + (n % 2);
  if (dims > std::size(kPrimes)) {
    throw Error(ErrorKind::InvalidInput, "positive_octant_directions: dimension too large");
  }
  for (std::size_t k = 1; k <= count; ++k) {
    Vector g(dims);
    for (std::size_t c = 0; c < dims; c += 2) {
      const double u1 = std::max(radical_inverse(k, kPrimes[c]), 1e-300);
      const double u2 = radical_inverse(k, kPrimes[c + 1]);
      const double rad = std::sqrt(-2.0 * std::log(u1));
      g[c] = rad * std::cos(2.0 * std::numbers::pi * u2);
      g[c + 1] = rad * std::sin(2.0 * std::numbers::pi * u2);
    }
    g.resize(n);
    for (double& v : g) v = std::abs(v);
    const double len = norm(g);
    if (len == 0.0) continue;
    for (double& v : g) v /= len;
    dirs.push_back(std::move(g));
  }
  return dirs;
}

}  // namespace relucert
