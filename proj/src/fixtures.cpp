#include "relucert/fixtures.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "relucert/errors.hpp"

namespace relucert {

RealMatrix mercedes_benz() {
  const double h = std::sqrt(3.0) / 2.0;
  return RealMatrix{{0.0, 1.0}, {-h, -0.5}, {h, -0.5}};
}

RealMatrix tetrahedron() {
  const double s = 1.0 / std::sqrt(3.0);
  return RealMatrix{{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
}

RealMatrix icosahedron() {
  const double phi = std::numbers::phi;
  const double s = 1.0 / std::sqrt(1.0 + phi * phi);
  const double a = s, b = phi * s;
  const double signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  RealMatrix out(12, 3);
  std::size_t r = 0;
  for (const auto& sg : signs) {
    out(r, 0) = 0.0, out(r, 1) = sg[0] * a, out(r, 2) = sg[1] * b;
    ++r;
  }
  for (const auto& sg : signs) {
    out(r, 0) = sg[0] * a, out(r, 1) = sg[1] * b, out(r, 2) = 0.0;
    ++r;
  }
  for (const auto& sg : signs) {
    out(r, 0) = sg[0] * b, out(r, 1) = 0.0, out(r, 2) = sg[1] * a;
    ++r;
  }
  return out;
}

RealMatrix standard_basis(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "basis needs n >= 1");
  return RealMatrix::identity(n);
}

RealMatrix random_sphere(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0 || m == 0) throw Error(ErrorKind::InvalidInput, "random-sphere needs n, m >= 1");
  std::mt19937_64 rng(seed);
  // 53-bit uniform in (0, 1]; keeps log() finite.
  auto uniform = [&rng] { return (double((rng() >> 11) + 1)) * 0x1.0p-53; };
  RealMatrix out(m, n);
  for (std::size_t r = 0; r < m; ++r) {
    double len = 0.0;
    do {
      for (std::size_t c = 0; c < n; c += 2) {
        const double rad = std::sqrt(-2.0 * std::log(uniform()));
        const double ang = 2.0 * std::numbers::pi * uniform();
        out(r, c) = rad * std::cos(ang);
        if (c + 1 < n) out(r, c + 1) = rad * std::sin(ang);
      }
      len = norm(out.row(r));
    } while (len < 1e-12);
    for (double& v : out.row(r)) v /= len;
  }
  return out;
}

RealMatrix generate_fixture(std::string_view name, std::size_t n, std::size_t m,
                            std::uint64_t seed) {
  if (name == "mercedes") return mercedes_benz();
  if (name == "tetrahedron") return tetrahedron();
  if (name == "icosahedron") return icosahedron();
  if (name == "basis") return standard_basis(n);
  if (name == "random-sphere") return random_sphere(n, m, seed);
  throw Error(ErrorKind::InvalidInput, "unknown fixture '" + std::string(name) + "'");
}

}  // namespace relucert
