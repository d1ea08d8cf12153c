#pragma once

// Dense small-scale linear algebra. Everything here targets n <= ~50; no
// blocking, no BLAS.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace relucert {

using Vector = std::vector<double>;

/// Row-major dense matrix with finite entries.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  RealMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static RealMatrix identity(std::size_t n);
  static RealMatrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  Vector column(std::size_t c) const;

  const std::vector<double>& entries() const noexcept { return data_; }

  RealMatrix transposed() const;
  Vector multiply(std::span<const double> x) const;             // A x
  Vector multiply_transposed(std::span<const double> y) const;  // A^T y
  RealMatrix multiply(const RealMatrix& other) const;

  bool all_finite() const noexcept;

  friend bool operator==(const RealMatrix&, const RealMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

struct SymmetricEigen {
  Vector values;       // ascending
  RealMatrix vectors;  // column k belongs to values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi rotations; stops once the off-diagonal Frobenius norm falls
/// below `off_tol` (scaled by max(1, ||A||_F)).
SymmetricEigen jacobi_eigen(const RealMatrix& symmetric, double off_tol = 1e-13,
                            int max_sweeps = 100);

/// Lower Cholesky factor, or nullopt if a pivot drops below `min_pivot`.
std::optional<RealMatrix> cholesky(const RealMatrix& spd, double min_pivot);
Vector cholesky_solve(const RealMatrix& lower, std::span<const double> b);

/// Partial-pivot LU determinant.
double determinant(RealMatrix a);

/// Solves a square system with partial pivoting; nullopt when singular.
std::optional<Vector> solve_square(RealMatrix a, Vector b, double pivot_tol = 1e-14);

/// Householder least squares min ||A x - b|| for rows >= cols with full
/// column rank; nullopt when a column is (numerically) dependent.
std::optional<Vector> least_squares(const RealMatrix& a, std::span<const double> b,
                                    double rank_tol = 1e-13);

/// Unit normal of the hyperplane through n affinely independent points in
/// R^n (rows of `points`), via cofactor expansion of the difference matrix.
/// Returns nullopt when the points are affinely dependent.
std::optional<Vector> hyperplane_normal(const RealMatrix& points, double tol = 1e-14);

}  // namespace relucert
