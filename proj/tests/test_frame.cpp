#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "relucert/errors.hpp"
#include "relucert/fixtures.hpp"
#include "relucert/frame.hpp"

using namespace relucert;
using testing_support::gaussian_vector;
using testing_support::rows_of;

namespace {

const double kS3 = std::sqrt(3.0);

UnitFrame mb() { return UnitFrame(mercedes_benz()); }

// Random subset of size k from 0..m-1.
IndexSet random_subset(std::mt19937_64& rng, std::size_t m, std::size_t k) {
  std::vector<std::size_t> all(m);
  for (std::size_t i = 0; i < m; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(k);
  return IndexSet(all);
}

}  // namespace

TEST_CASE("normalize divides rows and biases by the row norm") {
  const auto out = normalize(RealMatrix{{0.0, 2.0}, {1.0, 0.0}}, Vector{1.0, 0.0});
  CHECK(out.frame.element(0)[0] == 0.0);
  CHECK(out.frame.element(0)[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(out.rescaled_bias[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out.norms[0] == 2.0);
}

TEST_CASE("normalize leaves unit rows alone") {
  const auto out = normalize(mercedes_benz(), Vector{-0.5, -0.5, -0.5});
  CHECK(max_abs_diff(out.frame.elements().entries(), mercedes_benz().entries()) <= 1e-15);
  for (double b : out.rescaled_bias) CHECK(b == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("normalize rejects a zero row") {
  try {
    normalize(RealMatrix{{1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}}, Vector{0.0, 1.0, 0.0});
    FAIL("expected ZeroRow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroRow);
  }
}

TEST_CASE("normalize preserves active sets exactly") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    RealMatrix w(7, 3);
    Vector b(7);
    for (std::size_t i = 0; i < 7; ++i) {
      const auto row = gaussian_vector(rng, 3);
      const double s = scale(rng);
      for (std::size_t k = 0; k < 3; ++k) w(i, k) = s * row[k];
      b[i] = gaussian_vector(rng, 1)[0];
    }
    const auto out = normalize(w, b);
    const auto x = gaussian_vector(rng, 3);
    for (std::size_t i = 0; i < 7; ++i) {
      const bool raw = dot(x, w.row(i)) >= b[i];
      const bool normed = dot(x, out.frame.element(i)) >= out.rescaled_bias[i];
      // Floating point can split the exact equivalence only when the two
      // sides agree to rounding; skip those.
      if (std::abs(dot(x, w.row(i)) - b[i]) > 1e-12 * out.norms[i]) CHECK(raw == normed);
    }
  }
}

TEST_CASE("UnitFrame validates its rows") {
  CHECK_THROWS_AS(UnitFrame(RealMatrix{{1.0, 0.1}, {0.0, 1.0}}), Error);
  CHECK_THROWS_AS(UnitFrame(RealMatrix{{1.0, 0.0}}), Error);  // m < n
}

TEST_CASE("analysis examples") {
  const auto a = analysis(mb(), Vector{0.0, 1.0});
  CHECK(a[0] == doctest::Approx(1.0));
  CHECK(a[1] == doctest::Approx(-0.5));
  CHECK(a[2] == doctest::Approx(-0.5));
  for (double v : analysis(mb(), Vector{0.0, 0.0})) CHECK(v == 0.0);
  const auto e = analysis(UnitFrame(standard_basis(2)), Vector{0.3, 0.7});
  CHECK(e[0] == 0.3);
  CHECK(e[1] == 0.7);
  CHECK_THROWS_AS(analysis(mb(), Vector{1.0, 2.0, 3.0}), Error);
}

TEST_CASE("synthesis examples") {
  const auto s = synthesis(UnitFrame(standard_basis(2)), Vector{0.3, 0.7});
  CHECK(s[0] == 0.3);
  CHECK(s[1] == 0.7);
  const auto z = synthesis(mb(), Vector{1.0, 1.0, 1.0});
  CHECK(std::abs(z[0]) <= 1e-15);
  CHECK(std::abs(z[1]) <= 1e-15);
  for (double v : synthesis(mb(), Vector{0.0, 0.0, 0.0})) CHECK(v == 0.0);
  CHECK_THROWS_AS(synthesis(mb(), Vector{1.0}), Error);
}

TEST_CASE("frame_bounds examples") {
  const auto full = frame_bounds(mb(), IndexSet::range(3));
  CHECK(full.lower == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(full.upper == doctest::Approx(1.5).epsilon(1e-12));

  // The 2x2 operator [[3/4, sqrt3/4], [sqrt3/4, 5/4]] solved by the
  // characteristic polynomial.
  const auto ev = oracle::charpoly_eigenvalues({{0.75, kS3 / 4.0}, {kS3 / 4.0, 1.25}});
  const auto pair = frame_bounds(mb(), IndexSet{0, 1});
  CHECK(std::abs(pair.lower - ev[0]) <= 1e-12);
  CHECK(std::abs(pair.upper - ev[1]) <= 1e-12);
  CHECK(pair.lower == doctest::Approx(0.5).epsilon(1e-12));

  try {
    frame_bounds(mb(), IndexSet{0});
    FAIL("expected NotAFrame");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAFrame);
  }
}

TEST_CASE("is_frame examples") {
  CHECK(is_frame(mb(), IndexSet{0, 1}));
  CHECK_FALSE(is_frame(mb(), IndexSet{1}));
  CHECK(is_frame(UnitFrame(tetrahedron()), IndexSet{0, 1, 2}));
  CHECK_FALSE(is_frame(mb(), IndexSet{}));
}

TEST_CASE("dual_synthesis examples") {
  const auto id = dual_synthesis(UnitFrame(standard_basis(2)), IndexSet{0, 1});
  CHECK(max_abs_diff(id.entries(), RealMatrix::identity(2).entries()) <= 1e-15);

  const IndexSet pair{0, 1};
  const auto d = dual_synthesis(mb(), pair);
  const Vector x{0.2, -0.4};
  Vector rec(2, 0.0);
  for (std::size_t k = 0; k < pair.size(); ++k) {
    const double c = dot(x, mb().element(pair[k]));
    for (std::size_t r = 0; r < 2; ++r) rec[r] += c * d(r, k);
  }
  CHECK(max_abs_diff(rec, x) <= 1e-12);

  const auto full = dual_synthesis(mb(), IndexSet::range(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t r = 0; r < 2; ++r)
      CHECK(std::abs(full(r, i) - 2.0 / 3.0 * mb().element(i)[r]) <= 1e-12);

  CHECK_THROWS_AS(dual_synthesis(mb(), IndexSet{2}), Error);
}

TEST_CASE("IndexSet keeps indices sorted and distinct") {
  const IndexSet s{4, 1, 4, 2};
  CHECK(s.values() == std::vector<std::size_t>{1, 2, 4});
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(3));
  CHECK(IndexSet{1, 4}.is_subset_of(s));
  CHECK(s.intersection_size(IndexSet{0, 1, 4}) == 2);
  CHECK(s.united(IndexSet{0}).values() == std::vector<std::size_t>{0, 1, 2, 4});
}

TEST_CASE("property: analysis and synthesis are adjoint") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 4, m = n + 3 + trial % 7;
    const UnitFrame f(random_sphere(n, m, 100 + trial));
    const auto x = gaussian_vector(rng, n);
    const auto c = gaussian_vector(rng, m);
    CHECK(std::abs(dot(analysis(f, x), c) - dot(x, synthesis(f, c))) <= 1e-12);
  }
}

TEST_CASE("property: frame inequality holds on random unit vectors") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 3, m = 2 * n + trial % 5;
    const UnitFrame f(random_sphere(n, m, 200 + trial));
    const IndexSet sub = random_subset(rng, m, n + 1);
    if (!is_frame(f, sub)) continue;
    const auto b = frame_bounds(f, sub);
    for (int s = 0; s < 50; ++s) {
      auto x = gaussian_vector(rng, n);
      const double len = norm(x);
      for (auto& e : x) e /= len;
      double energy = 0.0;
      for (std::size_t i : sub) energy += dot(x, f.element(i)) * dot(x, f.element(i));
      CHECK(energy >= b.lower - 1e-10);
      CHECK(energy <= b.upper + 1e-10);
    }
  }
}

TEST_CASE("property: canonical dual reconstructs on rank-n subsets") {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int trial = 0; checked < 100; ++trial) {
    const std::size_t n = 2 + trial % 4, m = n + 2 + trial % 6;
    const UnitFrame f(random_sphere(n, m, 300 + trial));
    const IndexSet sub = random_subset(rng, m, n + trial % 3);
    if (!is_frame(f, sub)) continue;
    ++checked;
    const auto d = dual_synthesis(f, sub);
    const auto x = gaussian_vector(rng, n);
    Vector rec(n, 0.0);
    for (std::size_t k = 0; k < sub.size(); ++k) {
      const double c = dot(x, f.element(sub[k]));
      for (std::size_t r = 0; r < n; ++r) rec[r] += c * d(r, k);
    }
    CHECK(max_abs_diff(rec, x) <= 1e-10 * std::max(1.0, norm(x)));
  }
}

TEST_CASE("property: frame_bounds agrees with eigenvalue oracles") {
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 1 + trial % 6, m = n + 1 + trial % 5;
    const UnitFrame f(random_sphere(n, m, 400 + trial));
    const IndexSet all = IndexSet::range(m);
    const auto rows = rows_of(f);
    const auto s = oracle::frame_operator(rows, all.values());
    double lo, hi;
    if (n <= 3) {
      const auto ev = oracle::charpoly_eigenvalues(s);
      lo = ev.front();
      hi = ev.back();
    } else {
      lo = oracle::smallest_eigenvalue(s);
      hi = oracle::power_iteration(s);
    }
    if (lo < 1e-6) continue;  // not a frame: covered elsewhere
    const auto b = frame_bounds(f, all);
    CHECK(std::abs(b.lower - lo) <= 1e-9);
    CHECK(std::abs(b.upper - hi) <= 1e-9);
  }
}
