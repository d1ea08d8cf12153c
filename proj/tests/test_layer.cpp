#include <cmath>
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

UnitFrame mb() { return UnitFrame(mercedes_benz()); }

Vector filled(std::size_t m, double v) { return Vector(m, v); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("forward examples") {
  const ReLULayer layer(mb(), filled(3, -0.5));
  const auto z = forward(layer, Vector{0.0, 1.0});
  CHECK(z[0] == doctest::Approx(1.5));
  CHECK(z[1] == 0.0);
  CHECK(z[2] == 0.0);

  const Vector x{0.1, 0.2};
  const ReLULayer tight(mb(), analysis(mb(), x));
  for (double e : forward(tight, x)) CHECK(e == 0.0);

  const ReLULayer basis(UnitFrame(standard_basis(3)), filled(3, 0.0));
  const auto b = forward(basis, Vector{0.3, -0.7, 0.0});
  CHECK(b == Vector{0.3, 0.0, 0.0});

  CHECK(kind_of([&] { forward(layer, Vector{1.0}); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("active sets") {
  const ReLULayer layer(mb(), filled(3, -0.5));
  const Vector top{0.0, 1.0};
  CHECK(active_set(layer, top) == IndexSet{0, 1, 2});
  CHECK(active_from_output(forward(layer, top)) == IndexSet{0});
  CHECK(active_from_output(Vector{0.0, 0.0, 0.0}).empty());

  std::mt19937_64 rng(3);
  for (double r : {1.0, 2.5}) {
    const ReLULayer trivial(mb(), filled(3, -r), r);
    for (int s = 0; s < 500; ++s)
      CHECK(active_set(trivial, oracle::ball_sample(rng, 2, r)) == IndexSet::range(3));
  }
}

TEST_CASE("rectifying_at") {
  const Vector bias = filled(3, -0.5);
  CHECK(rectifying_at(mb(), bias, Vector{0.0, 0.0}));
  CHECK(rectifying_at(mb(), bias, Vector{0.0, 1.0}));  // equalities count
  CHECK_FALSE(rectifying_at(mb(), filled(3, -0.25), Vector{0.0, 1.0}));
}

TEST_CASE("certify examples") {
  const auto poly = build_polytope(mb());
  const auto unit = pbe_ball(poly, 1.0);
  const auto low = certify(ReLULayer(mb(), filled(3, -0.6)), unit);
  CHECK(low.injective);
  CHECK(low.failing.empty());
  for (double g : low.margins) CHECK(g == doctest::Approx(0.1));

  const auto high = certify(ReLULayer(mb(), filled(3, -0.4)), unit);
  CHECK_FALSE(high.injective);
  CHECK(high.failing == IndexSet{0, 1, 2});

  const auto wide = certify(ReLULayer(mb(), filled(3, -1.0), 2.0), unit);
  CHECK(wide.injective);
  const auto wide_high = certify(ReLULayer(mb(), filled(3, -0.25), 2.0), unit);
  CHECK_FALSE(wide_high.injective);
}

TEST_CASE("certify checks the frame and domain") {
  const auto unit = pbe_ball(build_polytope(UnitFrame(tetrahedron())), 1.0);
  const ReLULayer other(mb(), filled(3, -1.0));
  CHECK(kind_of([&] { certify(other, unit); }) == ErrorKind::FrameMismatch);
  const auto mb_est = pbe_ball(build_polytope(mb()), 1.0);
  const ReLULayer pos(mb(), filled(3, -1.0), 1.0, Domain::BallPositive);
  CHECK(kind_of([&] { certify(pos, mb_est); }) == ErrorKind::FrameMismatch);
}

TEST_CASE("certify ignores unconstrained entries") {
  const auto p = build_polytope(UnitFrame(icosahedron()));
  const auto rep = positive_facets(p);
  const auto est = pbe_positive(p, rep, 1.0);
  const ReLULayer layer(p.frame(), filled(12, 5.0), 1.0, Domain::BallPositive);
  const auto cert = certify(layer, est);
  for (std::size_t i = 0; i < 12; ++i) CHECK(cert.failing.contains(i) == rep.vertices.contains(i));
}

TEST_CASE("dual bank shapes and canonical decomposition") {
  const auto check_bank = [](const RealMatrix& pts, std::size_t facets, std::size_t cols) {
    const auto p = build_polytope(UnitFrame(pts));
    const auto bank = build_dual_bank(p, filled(pts.rows(), 0.0));
    REQUIRE(bank.size() == facets);
    std::mt19937_64 rng(9);
    for (std::size_t j = 0; j < bank.size(); ++j) {
      CHECK(bank.dual(j).rows() == pts.cols());
      CHECK(bank.dual(j).cols() == cols);
      const auto x = testing_support::gaussian_vector(rng, pts.cols());
      Vector rec(pts.cols(), 0.0);
      for (std::size_t k = 0; k < bank.vertices(j).size(); ++k) {
        const double c = dot(x, p.frame().element(bank.vertices(j)[k]));
        for (std::size_t r = 0; r < pts.cols(); ++r) rec[r] += c * bank.dual(j)(r, k);
      }
      CHECK(max_abs_diff(rec, x) <= 1e-10);
    }
    return bank;
  };
  check_bank(mercedes_benz(), 3, 2);
  check_bank(tetrahedron(), 4, 3);
  const auto basis = check_bank(standard_basis(3), 1, 3);
  CHECK(max_abs_diff(basis.dual(0).entries(), RealMatrix::identity(3).entries()) <= 1e-15);
}

TEST_CASE("reconstruct examples") {
  const ReLULayer layer(mb(), filled(3, -0.5));
  const auto bank = build_dual_bank(build_polytope(mb()), layer.bias());
  const auto z = forward(layer, Vector{0.0, 0.5});
  CHECK(max_abs_diff(z, Vector{1.0, 0.25, 0.25}) <= 1e-15);
  CHECK(max_abs_diff(reconstruct(bank, layer, z), Vector{0.0, 0.5}) <= 1e-10);

  // Only one strictly positive output: the fallback uses an edge whose
  // other vertex sits exactly on its threshold.
  const auto top = forward(layer, Vector{0.0, 1.0});
  CHECK(active_from_output(top) == IndexSet{0});
  CHECK(max_abs_diff(reconstruct(bank, layer, top), Vector{0.0, 1.0}) <= 1e-10);
}

TEST_CASE("reconstruct rejects outputs outside the image") {
  // With alpha = -1 every input of the unit ball has all three outputs
  // positive, since the correlations sum to zero: z = 0 is unreachable.
  const ReLULayer trivial(mb(), filled(3, -1.0));
  const auto bank = build_dual_bank(build_polytope(mb()), trivial.bias());
  CHECK(kind_of([&] { reconstruct(bank, trivial, Vector{0.0, 0.0, 0.0}); }) ==
        ErrorKind::ReconstructionFailed);
  CHECK(kind_of([&] { reconstruct(bank, trivial, Vector{5.0, 5.0, 5.0}); }) ==
        ErrorKind::ReconstructionFailed);
  const ReLULayer pos(mb(), filled(3, -1.0), 1.0, Domain::BallPositive);
  CHECK(kind_of([&] { reconstruct(bank, pos, Vector{1.0, 1.0, 1.0}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("property: tetrahedron roundtrip") {
  const UnitFrame t(tetrahedron());
  const auto est = pbe_ball(build_polytope(t), 1.0);
  const ReLULayer layer(t, est.alpha_scaled);
  const auto bank = build_dual_bank(build_polytope(t), layer.bias());
  std::mt19937_64 rng(13);
  for (int s = 0; s < 100; ++s) {
    const auto x = oracle::ball_sample(rng, 3, 1.0);
    CHECK(max_abs_diff(reconstruct(bank, layer, forward(layer, x)), x) <= 1e-8);
  }
}

TEST_CASE("property: the covering facet's left inverse recovers x") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 3, m = n + 5 + trial % 6;
    const auto p = build_polytope(UnitFrame(omnidirectional_frame(n, m, 1300 + 7 * trial)));
    const auto est = pbe_ball(p, 1.0);
    const ReLULayer layer(p.frame(), est.alpha_scaled);
    const auto bank = build_dual_bank(p, layer.bias());
    for (int s = 0; s < 300; ++s) {
      const auto x = oracle::ball_sample(rng, n, 1.0);
      const auto z = forward(layer, x);
      CHECK(max_abs_diff(bank.apply(covering_facet(p, x), z), x) <= 1e-9);
      CHECK(max_abs_diff(reconstruct(bank, layer, z), x) <= 1e-8);
    }
  }
}

TEST_CASE("property: stability bounds on sampled inputs") {
  // Certified content: the covering facet is active and its frame bounds are
  // at least A0; the full frame operator is at most B0. The shifted-output
  // form with a negative bias is only reported.
  std::mt19937_64 rng(23);
  std::size_t shifted_violations = 0, samples = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 3, m = n + 4 + trial % 8;
    const auto p = build_polytope(UnitFrame(omnidirectional_frame(n, m, 1500 + 11 * trial)));
    const auto est = pbe_ball(p, 1.0);
    const auto st = stability(p, 1.0);
    const auto rows = rows_of(p.frame());
    const ReLULayer layer(p.frame(), est.alpha_scaled);
    for (int s = 0; s < 1000; ++s) {
      const auto x = oracle::ball_sample(rng, n, 1.0);
      const double xx = oracle::dot(x, x);
      double facet_energy = 0.0, total = 0.0;
      for (std::size_t i : p.facet(covering_facet(p, x)).vertices)
        facet_energy += oracle::dot(x, rows[i]) * oracle::dot(x, rows[i]);
      for (const auto& row : rows) total += oracle::dot(x, row) * oracle::dot(x, row);
      CHECK(facet_energy >= st.A0 * xx - 1e-9);
      CHECK(total <= st.B0 * xx + 1e-9);
      const auto z = forward(layer, x);
      const double zz = dot(z, z);
      shifted_violations += (zz < st.A0 * xx - 1e-9) || (zz > st.B0 * xx + 1e-9);
      ++samples;
    }
  }
  MESSAGE("samples violating the shifted two-sided bound: " << shifted_violations << " of "
                                                            << samples);
}
