#pragma once

// Frame-theoretic operators on a finite collection of unit vectors in R^n.
//
// A UnitFrame stores the m frame elements as the rows of an m x n matrix, so
// the matrix itself is the analysis operator C and its transpose the
// synthesis operator D. Sub-collections are addressed with IndexSet. All
// indices are 0-based.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "relucert/linalg.hpp"

namespace relucert {

inline constexpr double kTolUnit = 1e-12;
inline constexpr double kTolZero = 1e-12;
inline constexpr double kTolRank = 1e-9;

/// Sorted, duplicate-free list of 0-based indices.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<std::size_t> indices);
  explicit IndexSet(std::vector<std::size_t> indices);

  static IndexSet range(std::size_t count);

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  bool contains(std::size_t i) const;
  bool is_subset_of(const IndexSet& other) const;
  std::size_t intersection_size(const IndexSet& other) const;
  IndexSet united(const IndexSet& other) const;

  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  std::size_t operator[](std::size_t k) const { return indices_[k]; }
  const std::vector<std::size_t>& values() const noexcept { return indices_; }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend auto operator<=>(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> indices_;
};

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

class UnitFrame {
 public:
  /// Validates unit rows (within kTolUnit) and m >= n.
  explicit UnitFrame(RealMatrix elements);

  std::size_t m() const noexcept { return elements_.rows(); }
  std::size_t n() const noexcept { return elements_.cols(); }
  const RealMatrix& elements() const noexcept { return elements_; }
  std::span<const double> element(std::size_t i) const { return elements_.row(i); }

  /// FNV-1a over the raw entry bytes; used to tie estimates to frames.
  std::uint64_t fingerprint() const noexcept;

 private:
  RealMatrix elements_;
};

struct NormalizedLayer {
  UnitFrame frame;
  Vector rescaled_bias;
  Vector norms;
};

/// Divides every row and its bias by the row norm. The active set
/// {i : <x, w_i> >= b_i} is unchanged by this rescaling.
NormalizedLayer normalize(const RealMatrix& weights, std::span<const double> bias);

Vector analysis(const UnitFrame& frame, std::span<const double> x);
Vector synthesis(const UnitFrame& frame, std::span<const double> coefficients);

/// S_L = sum_{i in L} x_i x_i^T.
RealMatrix frame_operator(const UnitFrame& frame, const IndexSet& subset);

/// Extreme eigenvalues of S_L. Throws NotAFrame when the subset does not
/// span R^n (smallest eigenvalue below kTolRank relative to the largest).
FrameBounds frame_bounds(const UnitFrame& frame, const IndexSet& subset);

bool is_frame(const UnitFrame& frame, const IndexSet& subset);

/// n x |L| matrix whose k-th column is S_L^{-1} x_{L[k]}, the canonical dual
/// of the sub-collection.
RealMatrix dual_synthesis(const UnitFrame& frame, const IndexSet& subset);

/// Synthesis matrix D_L (n x |L|), columns are the selected frame elements.
RealMatrix synthesis_matrix(const UnitFrame& frame, const IndexSet& subset);

}  // namespace relucert
