#include "relucert/frame.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "relucert/errors.hpp"

namespace relucert {

IndexSet::IndexSet(std::initializer_list<std::size_t> indices)
    : IndexSet(std::vector<std::size_t>(indices)) {}

IndexSet::IndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

IndexSet IndexSet::range(std::size_t count) {
  std::vector<std::size_t> all(count);
  for (std::size_t i = 0; i < count; ++i) all[i] = i;
  return IndexSet(std::move(all));
}

bool IndexSet::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

bool IndexSet::is_subset_of(const IndexSet& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(),
                       indices_.end());
}

std::size_t IndexSet::intersection_size(const IndexSet& other) const {
  std::size_t count = 0;
  auto a = indices_.begin();
  auto b = other.indices_.begin();
  while (a != indices_.end() && b != other.indices_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++count, ++a, ++b;
    }
  }
  return count;
}

IndexSet IndexSet::united(const IndexSet& other) const {
  std::vector<std::size_t> out;
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out));
  return IndexSet(std::move(out));
}

UnitFrame::UnitFrame(RealMatrix elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw Error(ErrorKind::InvalidInput, "empty frame");
  if (!elements_.all_finite()) throw Error(ErrorKind::InvalidInput, "non-finite frame entry");
  if (elements_.rows() < elements_.cols()) {
    throw Error(ErrorKind::InvalidInput, "frame needs m >= n (got m=" +
                                             std::to_string(elements_.rows()) +
                                             ", n=" + std::to_string(elements_.cols()) + ")");
  }
  for (std::size_t i = 0; i < elements_.rows(); ++i) {
    if (std::abs(norm(elements_.row(i)) - 1.0) > kTolUnit) {
      throw Error(ErrorKind::InvalidInput, "frame element " + std::to_string(i) +
                                               " is not unit norm");
    }
  }
}

std::uint64_t UnitFrame::fingerprint() const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* p, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t k = 0; k < len; ++k) {
      h ^= bytes[k];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t shape[2] = {elements_.rows(), elements_.cols()};
  mix(shape, sizeof shape);
  for (double v : elements_.entries()) {
    const double canon = v == 0.0 ? 0.0 : v;  // fold -0.0
    mix(&canon, sizeof canon);
  }
  return h;
}

NormalizedLayer normalize(const RealMatrix& weights, std::span<const double> bias) {
  if (bias.size() != weights.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "bias length " + std::to_string(bias.size()) +
                                                  " != rows " + std::to_string(weights.rows()));
  }
  if (!weights.all_finite()) throw Error(ErrorKind::InvalidInput, "non-finite weight");
  RealMatrix unit(weights.rows(), weights.cols());
  Vector rescaled(bias.size());
  Vector norms(bias.size());
  for (std::size_t i = 0; i < weights.rows(); ++i) {
    const double len = norm(weights.row(i));
    if (len < kTolZero) throw ZeroRowError(i);
    for (std::size_t c = 0; c < weights.cols(); ++c) unit(i, c) = weights(i, c) / len;
    rescaled[i] = bias[i] / len;
    norms[i] = len;
  }
  return {UnitFrame(std::move(unit)), std::move(rescaled), std::move(norms)};
}

Vector analysis(const UnitFrame& frame, std::span<const double> x) {
  if (x.size() != frame.n()) throw Error(ErrorKind::DimensionMismatch, "analysis: length != n");
  return frame.elements().multiply(x);
}

Vector synthesis(const UnitFrame& frame, std::span<const double> coefficients) {
  if (coefficients.size() != frame.m()) {
    throw Error(ErrorKind::DimensionMismatch, "synthesis: length != m");
  }
  return frame.elements().multiply_transposed(coefficients);
}

RealMatrix frame_operator(const UnitFrame& frame, const IndexSet& subset) {
  const std::size_t n = frame.n();
  RealMatrix s(n, n);
  for (std::size_t i : subset) {
    if (i >= frame.m()) throw Error(ErrorKind::InvalidInput, "index out of range");
    const auto x = frame.element(i);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) s(r, c) += x[r] * x[c];
  }
  return s;
}

FrameBounds frame_bounds(const UnitFrame& frame, const IndexSet& subset) {
  if (subset.empty()) throw Error(ErrorKind::InvalidInput, "frame_bounds: empty subset");
  const auto eig = jacobi_eigen(frame_operator(frame, subset));
  const FrameBounds bounds{eig.values.front(), eig.values.back()};
  if (bounds.lower < kTolRank * std::max(1.0, bounds.upper)) {
    throw Error(ErrorKind::NotAFrame, "sub-collection does not span R^" +
                                          std::to_string(frame.n()));
  }
  return bounds;
}

bool is_frame(const UnitFrame& frame, const IndexSet& subset) {
  if (subset.size() < frame.n()) return false;
  const auto eig = jacobi_eigen(frame_operator(frame, subset));
  return eig.values.front() >= kTolRank * std::max(1.0, eig.values.back());
}

RealMatrix synthesis_matrix(const UnitFrame& frame, const IndexSet& subset) {
  RealMatrix d(frame.n(), subset.size());
  for (std::size_t k = 0; k < subset.size(); ++k) {
    const auto x = frame.element(subset[k]);
    for (std::size_t r = 0; r < frame.n(); ++r) d(r, k) = x[r];
  }
  return d;
}

RealMatrix dual_synthesis(const UnitFrame& frame, const IndexSet& subset) {
  if (!is_frame(frame, subset)) {
    throw Error(ErrorKind::NotAFrame, "dual_synthesis: sub-collection is not a frame");
  }
  const RealMatrix s = frame_operator(frame, subset);
  const auto lower = cholesky(s, kTolRank);
  if (!lower) throw Error(ErrorKind::NotAFrame, "dual_synthesis: Cholesky pivot below tolerance");
  RealMatrix dual(frame.n(), subset.size());
  for (std::size_t k = 0; k < subset.size(); ++k) {
    const Vector col = cholesky_solve(*lower, frame.element(subset[k]));
    for (std::size_t r = 0; r < frame.n(); ++r) dual(r, k) = col[r];
  }
  return dual;
}

}  // namespace relucert
