#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "relucert/errors.hpp"
#include "relucert/fixtures.hpp"
#include "relucert/layer.hpp"
#include "relucert/pbe.hpp"

using namespace relucert;
using testing_support::omnidirectional_frame;
using testing_support::rows_of;

namespace {

Polytope hull_of(const RealMatrix& m) { return build_polytope(UnitFrame(m)); }

void check_all(const Vector& v, double expected, double tol) {
  for (double e : v) CHECK(std::abs(e - expected) <= tol);
}

// Indices of the Mercedes-Benz frame lying on some edge that meets the
// closed quadrant, from a dense sweep along each edge.
IndexSet quadrant_vertices(const Polytope& p) {
  IndexSet out;
  for (const auto& f : p.facets()) {
    const auto a = p.frame().element(f.vertices[0]), b = p.frame().element(f.vertices[1]);
    for (int s = 0; s <= 100000; ++s) {
      const double t = s / 100000.0;
      if ((1 - t) * a[0] + t * b[0] >= -1e-12 && (1 - t) * a[1] + t * b[1] >= -1e-12) {
        out = out.united(f.vertices);
        break;
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("alpha_X on the named fixtures") {
  check_all(alpha_X(hull_of(mercedes_benz())), -0.5, 1e-12);
  check_all(alpha_X(hull_of(tetrahedron())), -1.0 / 3.0, 1e-12);
  const double phi = std::numbers::phi;
  check_all(alpha_X(hull_of(icosahedron())), phi / (1 + phi * phi), 1e-12);
}

TEST_CASE("pbe_ball on the named fixtures") {
  const auto mb = pbe_ball(hull_of(mercedes_benz()), 1.0);
  check_all(mb.alpha_B, -0.5, 1e-9);
  const auto te = pbe_ball(hull_of(tetrahedron()), 1.0);
  check_all(te.alpha_B, -1.0 / std::sqrt(3.0), 1e-9);
  const auto ic = pbe_ball(hull_of(icosahedron()), 1.0);
  for (double a : ic.alpha_B) CHECK(a == 0.0);
  for (const auto& s : ic.alpha_S) CHECK_FALSE(s.has_value());
  for (bool u : ic.unconstrained) CHECK_FALSE(u);
}

TEST_CASE("radius multiplies the estimate") {
  const auto est = pbe_ball(hull_of(mercedes_benz()), 3.1);
  CHECK(est.radius == 3.1);
  for (std::size_t i = 0; i < 3; ++i) CHECK(est.alpha_scaled[i] == 3.1 * est.alpha_B[i]);
}

TEST_CASE("pbe_ball requires an omnidirectional frame") {
  try {
    pbe_ball(hull_of(standard_basis(3)), 1.0);
    FAIL("expected NotOmnidirectional");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotOmnidirectional);
  }
}

TEST_CASE("pbe_positive on the standard basis is zero") {
  for (std::size_t n : {2u, 3u, 4u, 6u}) {
    const auto p = hull_of(standard_basis(n));
    const auto est = pbe_positive(p, positive_facets(p), 1.0);
    CHECK(est.domain == Domain::BallPositive);
    for (double a : est.alpha_B) CHECK(a == 0.0);
    for (bool u : est.unconstrained) CHECK_FALSE(u);
  }
}

TEST_CASE("pbe_positive on Mercedes-Benz flags exactly the off-quadrant vertices") {
  const auto p = hull_of(mercedes_benz());
  const auto rep = positive_facets(p);
  const auto est = pbe_positive(p, rep, 1.0);
  const IndexSet live = quadrant_vertices(p);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(est.unconstrained[i] == !live.contains(i));
    if (!est.unconstrained[i]) CHECK(est.alpha_B[i] <= 0.0);
  }
  // Every vertex has an edge at (0, 1); the worst correlation is -1/2.
  check_all(est.alpha_B, -0.5, 1e-9);
}

TEST_CASE("pbe_positive on the icosahedron") {
  const auto p = hull_of(icosahedron());
  const auto rep = positive_facets(p);
  REQUIRE(rep.nonneg_omnidirectional);
  const auto est = pbe_positive(p, rep, 1.0);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(est.unconstrained[i] == !rep.vertices.contains(i));
    if (rep.vertices.contains(i)) {
      CHECK(est.alpha_B[i] == 0.0);
    } else {
      CHECK(est.alpha_B[i] == std::numeric_limits<double>::infinity());
    }
  }
}

TEST_CASE("pbe_positive requires non-negative omnidirectionality") {
  std::vector<Vector> rows;
  for (double d : {10.0, 45.0, 80.0}) {
    const double t = d * std::numbers::pi / 180.0;
    rows.push_back({std::cos(t), std::sin(t)});
  }
  const auto p = hull_of(RealMatrix::from_rows(rows));
  try {
    pbe_positive(p, positive_facets(p), 1.0);
    FAIL("expected NotNonnegOmnidirectional");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotNonnegOmnidirectional);
  }
}

TEST_CASE("stability examples") {
  const auto s = stability(hull_of(mercedes_benz()), 1.0);
  CHECK(s.A0 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.B0 == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(s.image_radius == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
  const auto cross = stability(hull_of(RealMatrix{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}), 1.0);
  CHECK(cross.B0 == doctest::Approx(2.0).epsilon(1e-12));
  const auto twice = stability(hull_of(mercedes_benz()), 2.0);
  CHECK(twice.image_radius == doctest::Approx(2.0 * s.image_radius).epsilon(1e-15));
}

TEST_CASE("property: ordering chain and case split") {
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 3, m = n + 3 + trial % 12;
    const auto p = hull_of(omnidirectional_frame(n, m, 500 + 97 * trial));
    const auto est = pbe_ball(p, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(est.alpha_B[i] <= 0.0);
      CHECK((est.alpha_B[i] == 0.0) == (est.alpha_X[i] >= 0.0));
      if (est.alpha_S[i]) {
        CHECK(est.alpha_B[i] <= *est.alpha_S[i] + 1e-9);
        CHECK(*est.alpha_S[i] <= est.alpha_X[i] + 1e-9);
      }
    }
  }
}

TEST_CASE("property: alpha_B is rectifying on sampled inputs") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + trial % 3, m = n + 4 + trial % 9;
    const double r = (trial % 2 == 0) ? 1.0 : 3.1;
    const auto p = hull_of(omnidirectional_frame(n, m, 700 + 31 * trial));
    const auto est = pbe_ball(p, r);
    const auto rows = rows_of(p.frame());
    for (int s = 0; s < 10000 / 12; ++s) {
      const auto x = oracle::ball_sample(rng, n, r);
      CHECK(oracle::rectifying(rows, est.alpha_scaled, x));
      if (norm(x) <= 1e-12) continue;
      const auto& f = p.facet(covering_facet(p, x));
      for (std::size_t i : f.vertices) CHECK(dot(x, rows[i]) >= est.alpha_scaled[i] - 1e-12);
    }
  }
}

TEST_CASE("property: B+ estimate is rectifying on the positive ball") {
  std::mt19937_64 rng(43);
  int checked = 0;
  for (int trial = 0; checked < 8; ++trial) {
    const std::size_t n = 2 + trial % 3, m = n + 4 + trial % 9;
    const auto p = hull_of(random_sphere(n, m, 900 + 13 * trial));
    const auto rep = positive_facets(p);
    if (!rep.nonneg_omnidirectional) continue;
    ++checked;
    const auto est = pbe_positive(p, rep, 1.0);
    const auto rows = rows_of(p.frame());
    for (int s = 0; s < 1000; ++s) {
      auto x = oracle::ball_sample(rng, n, 1.0);
      for (auto& e : x) e = std::abs(e);
      // Only J+ facets may be used: find one whose vertices are all active
      // and whose vertex set spans.
      bool ok = false;
      for (std::size_t j : rep.facets) {
        const auto& f = p.facet(j);
        bool all = true;
        for (std::size_t i : f.vertices)
          if (dot(x, rows[i]) < est.alpha_scaled[i] - 1e-12) all = false;
        if (all && oracle::gram_schmidt_rank(rows, f.vertices.values()) == n) ok = true;
      }
      CHECK(ok);
    }
  }
}

TEST_CASE("property: image of the ball under the estimated layer") {
  // The linear part obeys ||C x|| <= r sqrt(B0); the bias shift adds at
  // most ||alpha||. The bare r sqrt(B0) bound does not survive a negative
  // bias, which is counted here rather than asserted.
  std::mt19937_64 rng(47);
  std::size_t bare_violations = 0, samples = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 3, m = n + 3 + trial % 7;
    const double r = 1.0 + trial % 3;
    const auto p = hull_of(omnidirectional_frame(n, m, 1100 + 17 * trial));
    const auto est = pbe_ball(p, r);
    const auto st = stability(p, r);
    const ReLULayer layer(p.frame(), est.alpha_scaled, r);
    for (int s = 0; s < 1000; ++s) {
      const auto x = oracle::ball_sample(rng, n, r);
      const auto z = forward(layer, x);
      for (double e : z) CHECK(e >= 0.0);
      CHECK(norm(analysis(p.frame(), x)) <= st.image_radius + 1e-9);
      CHECK(norm(z) <= st.image_radius + norm(est.alpha_scaled) + 1e-9);
      bare_violations += norm(z) > st.image_radius + 1e-9;
      ++samples;
    }
  }
  MESSAGE("samples exceeding r*sqrt(B0) alone: " << bare_violations << " of " << samples);
}
