#pragma once

#include <random>

#include "oracles.hpp"
#include "relucert/fixtures.hpp"
#include "relucert/frame.hpp"
#include "relucert/polytope.hpp"
#include "relucert/linalg.hpp"

namespace testing_support {

inline oracle::Mat rows_of(const relucert::RealMatrix& a) {
  oracle::Mat out;
  for (std::size_t r = 0; r < a.rows(); ++r) out.emplace_back(a.row(r).begin(), a.row(r).end());
  return out;
}

inline oracle::Mat rows_of(const relucert::UnitFrame& f) { return rows_of(f.elements()); }

inline std::vector<std::vector<std::size_t>> vertex_sets(const std::vector<relucert::IndexSet>& s) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& v : s) out.push_back(v.values());
  return out;
}

inline relucert::Vector gaussian_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  relucert::Vector v(n);
  for (auto& e : v) e = g(rng);
  return v;
}

// First omnidirectional random frame at or after `seed`.
inline relucert::RealMatrix omnidirectional_frame(std::size_t n, std::size_t m, std::uint64_t seed) {
  for (;; ++seed) {
    auto pts = relucert::random_sphere(n, m, seed);
    if (relucert::is_omnidirectional(relucert::build_polytope(relucert::UnitFrame(pts)))) return pts;
  }
}

}  // namespace testing_support
