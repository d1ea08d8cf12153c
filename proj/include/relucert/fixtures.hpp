#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "relucert/linalg.hpp"

namespace relucert {

/// (0,1), (-sqrt3/2,-1/2), (sqrt3/2,-1/2)
RealMatrix mercedes_benz();
/// (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1), scaled by 1/sqrt3
RealMatrix tetrahedron();
/// (0,±1,±phi), (±1,±phi,0), (±phi,0,±1), scaled by 1/sqrt(1+phi^2); the sign
/// pairs run (+,+), (+,-), (-,+), (-,-) within each group.
RealMatrix icosahedron();
RealMatrix standard_basis(std::size_t n);
/// Rows drawn i.i.d. standard normal (Box-Muller over mt19937_64) and
/// normalised, hence uniform on the sphere. Same seed, same matrix.
RealMatrix random_sphere(std::size_t n, std::size_t m, std::uint64_t seed);

/// Dispatch by name: mercedes, tetrahedron, icosahedron, basis, random-sphere.
/// Throws InvalidInput for unknown names or missing parameters.
RealMatrix generate_fixture(std::string_view name, std::size_t n, std::size_t m,
                            std::uint64_t seed);

}  // namespace relucert
