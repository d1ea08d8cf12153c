#include "relucert/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "relucert/errors.hpp"

namespace relucert {

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::DimensionMismatch, "matrix entry count does not match shape");
  }
}

RealMatrix::RealMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix id(n, n);
  for (std::size_t i = 0; i < n; ++i) id(i, i) = 1.0;
  return id;
}

RealMatrix RealMatrix::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return {};
  RealMatrix out(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != out.cols()) {
      throw Error(ErrorKind::DimensionMismatch, "ragged rows");
    }
    std::copy(rows[r].begin(), rows[r].end(), out.row(r).begin());
  }
  return out;
}

Vector RealMatrix::column(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

RealMatrix RealMatrix::transposed() const {
  RealMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Vector RealMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "A x: length mismatch");
  Vector y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) y[r] = dot(row(r), x);
  return y;
}

Vector RealMatrix::multiply_transposed(std::span<const double> y) const {
  if (y.size() != rows_) throw Error(ErrorKind::DimensionMismatch, "A^T y: length mismatch");
  Vector x(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto a = row(r);
    for (std::size_t c = 0; c < cols_; ++c) x[c] += y[r] * a[c];
  }
  return x;
}

RealMatrix RealMatrix::multiply(const RealMatrix& other) const {
  if (cols_ != other.rows_) throw Error(ErrorKind::DimensionMismatch, "A B: inner dimension");
  RealMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  return out;
}

bool RealMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

namespace {

double off_diagonal_norm(const RealMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

SymmetricEigen jacobi_eigen(const RealMatrix& symmetric, double off_tol, int max_sweeps) {
  const std::size_t n = symmetric.rows();
  if (n != symmetric.cols()) throw Error(ErrorKind::DimensionMismatch, "jacobi: not square");
  RealMatrix a = symmetric;
  RealMatrix v = RealMatrix::identity(n);
  const double scale = std::max(1.0, norm(a.entries()));

  int sweep = 0;
  for (; sweep < max_sweeps && off_diagonal_norm(a) >= off_tol * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rutishauser's stable rotation.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = RealMatrix(n, n);
  out.sweeps = sweep;
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

std::optional<RealMatrix> cholesky(const RealMatrix& spd, double min_pivot) {
  const std::size_t n = spd.rows();
  RealMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = spd(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > min_pivot)) return std::nullopt;
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = spd(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

Vector cholesky_solve(const RealMatrix& lower, std::span<const double> b) {
  const std::size_t n = lower.rows();
  Vector y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= lower(i, k) * y[k];
    y[i] /= lower(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) y[i] -= lower(k, i) * y[k];
    y[i] /= lower(i, i);
  }
  return y;
}

double determinant(RealMatrix a) {
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(piv, k), a(c, k));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return det;
}

std::optional<Vector> solve_square(RealMatrix a, Vector b, double pivot_tol) {
  const std::size_t n = a.rows();
  double scale = 0.0;
  for (double v : a.entries()) scale = std::max(scale, std::abs(v));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (std::abs(a(piv, c)) <= pivot_tol * scale) return std::nullopt;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(piv, k), a(c, k));
      std::swap(b[piv], b[c]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) b[i] -= a(i, k) * b[k];
    b[i] /= a(i, i);
  }
  return b;
}

std::optional<Vector> least_squares(const RealMatrix& a_in, std::span<const double> b_in,
                                    double rank_tol) {
  const std::size_t m = a_in.rows(), n = a_in.cols();
  if (m < n || b_in.size() != m) return std::nullopt;
  RealMatrix a = a_in;
  Vector b(b_in.begin(), b_in.end());
  double scale = 0.0;
  for (std::size_t c = 0; c < n; ++c) scale = std::max(scale, norm(a.column(c)));
  if (scale == 0.0) return std::nullopt;

  for (std::size_t k = 0; k < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k; i < m; ++i) alpha += a(i, k) * a(i, k);
    alpha = std::sqrt(alpha);
    if (alpha <= rank_tol * scale) return std::nullopt;
    if (a(k, k) > 0) alpha = -alpha;
    // v = x - alpha e1, stored in place below the diagonal.
    Vector v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = a(i, k);
    v[0] -= alpha;
    const double vnorm2 = dot(v, v);
    if (vnorm2 == 0.0) continue;
    for (std::size_t c = k; c < n; ++c) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += v[i - k] * a(i, c);
      s = 2.0 * s / vnorm2;
      for (std::size_t i = k; i < m; ++i) a(i, c) -= s * v[i - k];
    }
    double s = 0.0;
    for (std::size_t i = k; i < m; ++i) s += v[i - k] * b[i];
    s = 2.0 * s / vnorm2;
    for (std::size_t i = k; i < m; ++i) b[i] -= s * v[i - k];
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * x[k];
    x[i] = s / a(i, i);
  }
  return x;
}

std::optional<Vector> hyperplane_normal(const RealMatrix& points, double tol) {
  const std::size_t n = points.cols();
  if (points.rows() != n || n == 0) return std::nullopt;
  if (n == 1) return Vector{1.0};
  RealMatrix diffs(n - 1, n);
  double scale = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t c = 0; c < n; ++c) diffs(k - 1, c) = points(k, c) - points(0, c);
    scale *= norm(diffs.row(k - 1));
  }
  if (scale == 0.0) return std::nullopt;
  Vector normal(n);
  RealMatrix minor(n - 1, n - 1);
  for (std::size_t skip = 0; skip < n; ++skip) {
    for (std::size_t r = 0; r + 1 < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < n; ++c)
        if (c != skip) minor(r, cc++) = diffs(r, c);
    }
    const double sign = (skip % 2 == 0) ? 1.0 : -1.0;
    normal[skip] = sign * determinant(minor);
  }
  const double len = norm(normal);
  if (len <= tol * scale) return std::nullopt;
  for (double& v : normal) v /= len;
  return normal;
}

}  // namespace relucert
