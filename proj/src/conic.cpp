#include "relucert/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relucert/errors.hpp"

namespace relucert {

namespace {

RealMatrix select_columns(const RealMatrix& a, const std::vector<std::size_t>& cols) {
  RealMatrix out(a.rows(), cols.size());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = 0; k < cols.size(); ++k) out(r, k) = a(r, cols[k]);
  return out;
}

// Solves D^T g = c for g; exact whenever c lies in the row space of D.
std::optional<Vector> recover_direction(const RealMatrix& d, std::span<const double> c) {
  const std::size_t n = d.rows(), k = d.cols();
  std::optional<Vector> g;
  if (k >= n) g = least_squares(d.transposed(), c);
  if (!g) {
    // Minimal-norm solution g = D (D^T D)^{-1} c for full column rank D.
    const RealMatrix gram = d.transposed().multiply(d);
    auto y = solve_square(gram, Vector(c.begin(), c.end()), 1e-13);
    if (!y) return std::nullopt;
    g = d.multiply(*y);
  }
  const Vector back = d.multiply_transposed(*g);
  double resid = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    resid = std::max(resid, std::abs(back[i] - c[i]));
    scale = std::max(scale, std::abs(c[i]));
  }
  if (resid > 1e-9 * scale) return std::nullopt;
  return g;
}

}  // namespace

NnlsResult nnls(const RealMatrix& a, std::span<const double> b, int max_iters) {
  const std::size_t k = a.cols();
  NnlsResult out;
  out.x.assign(k, 0.0);
  std::vector<char> passive(k, 0), blocked(k, 0);

  auto gradient = [&] {
    Vector resid(b.begin(), b.end());
    const Vector ax = a.multiply(out.x);
    for (std::size_t r = 0; r < resid.size(); ++r) resid[r] -= ax[r];
    return a.multiply_transposed(resid);
  };
  const double w_tol = 1e-13 * std::max(1.0, norm(a.entries()) * norm(b));

  Vector w = gradient();
  while (true) {
    std::size_t enter = k;
    double best = w_tol;
    for (std::size_t j = 0; j < k; ++j) {
      if (!passive[j] && !blocked[j] && w[j] > best) {
        best = w[j];
        enter = j;
      }
    }
    if (enter == k) {
      out.converged = true;
      return out;
    }
    if (++out.iterations > max_iters) return out;
    passive[enter] = 1;

    bool moved = false;
    while (true) {
      std::vector<std::size_t> cols;
      std::size_t enter_pos = 0;
      for (std::size_t j = 0; j < k; ++j) {
        if (!passive[j]) continue;
        if (j == enter) enter_pos = cols.size();
        cols.push_back(j);
      }
      if (cols.empty()) break;
      const auto z = least_squares(select_columns(a, cols), b);
      if (!z || (!moved && (*z)[enter_pos] <= 0.0)) {
        // Dependent or non-improving column: exclude it until x changes.
        passive[enter] = 0;
        blocked[enter] = 1;
        break;
      }
      moved = true;
      bool interior = true;
      for (double v : *z) interior = interior && v > 0.0;
      if (interior) {
        std::fill(out.x.begin(), out.x.end(), 0.0);
        for (std::size_t t = 0; t < cols.size(); ++t) out.x[cols[t]] = (*z)[t];
        break;
      }
      double step = 1.0;
      for (std::size_t t = 0; t < cols.size(); ++t) {
        if ((*z)[t] <= 0.0) {
          const double xq = out.x[cols[t]];
          const double denom = xq - (*z)[t];
          if (denom > 0.0) step = std::min(step, xq / denom);
        }
      }
      double xmax = 0.0;
      for (std::size_t t = 0; t < cols.size(); ++t) {
        const std::size_t q = cols[t];
        out.x[q] += step * ((*z)[t] - out.x[q]);
        xmax = std::max(xmax, out.x[q]);
      }
      for (std::size_t q : cols) {
        if (out.x[q] <= 1e-15 * std::max(1.0, xmax)) {
          out.x[q] = 0.0;
          passive[q] = 0;
        }
      }
      if (++out.iterations > max_iters) return out;
    }
    if (moved) {
      std::fill(blocked.begin(), blocked.end(), 0);
      w = gradient();
    }
  }
}

SolveResult min_linear_capped_cone(const CappedConeProblem& p) {
  const std::size_t n = p.D.rows(), k = p.D.cols();
  if (k == 0 || n == 0 || p.c.size() != k) {
    throw Error(ErrorKind::DimensionMismatch, "capped cone: D is n x k and c has length k");
  }
  if (!p.D.all_finite()) throw Error(ErrorKind::InvalidInput, "capped cone: non-finite D");

  SolveResult out;
  out.argmin.assign(k, 0.0);

  if (k == 1) {
    const double len = norm(p.D.column(0));
    if (p.c[0] < 0.0) {
      out.argmin[0] = 1.0 / len;
      out.value = p.c[0] / len;
    }
    out.iterations = 1;
    return out;
  }

  const auto g = recover_direction(p.D, p.c);
  if (!g) {
    throw Error(ErrorKind::InvalidInput, "capped cone: objective is not in the row space of D");
  }
  Vector target(*g);
  for (double& v : target) v = -v;
  const NnlsResult proj = nnls(p.D, target, p.max_iters);
  out.iterations = proj.iterations;
  if (!proj.converged) {
    throw Error(ErrorKind::NotConverged,
                "capped cone: no convergence within " + std::to_string(p.max_iters) + " iterations");
  }

  const Vector y = p.D.multiply(proj.x);
  const double s = norm(y);
  if (s <= 1e-15) {
    // -g has no component inside the cone: the minimum 0 is attained at d = 0.
    for (std::size_t i = 0; i < k; ++i) out.kkt_residual = std::max(out.kkt_residual, -p.c[i]);
    return out;
  }
  for (std::size_t i = 0; i < k; ++i) out.argmin[i] = proj.x[i] / s;
  out.value = dot(p.c, out.argmin);

  // Stationarity c + mu D^T D d - lambda = 0 with mu = s, lambda >= 0, lambda_i d_i = 0.
  const Vector dd = p.D.multiply(out.argmin);
  const Vector dtdd = p.D.multiply_transposed(dd);
  double resid = std::abs(norm(dd) - 1.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double lambda = p.c[i] + s * dtdd[i];
    resid = std::max({resid, -lambda, std::abs(lambda * out.argmin[i]), -out.argmin[i]});
  }
  out.kkt_residual = resid;
  return out;
}

bool lp_feasible(const RealMatrix& a_eq, std::span<const double> b_eq, bool nonneg_vars,
                 const RealMatrix& a_ineq, std::span<const double> b_ineq, double slack) {
  const std::size_t eq_rows = a_eq.rows(), in_rows = a_ineq.rows();
  if (b_eq.size() != eq_rows || b_ineq.size() != in_rows) {
    throw Error(ErrorKind::DimensionMismatch, "lp_feasible: rhs length mismatch");
  }
  std::size_t nv = 0;
  if (eq_rows > 0) nv = a_eq.cols();
  if (in_rows > 0) {
    if (eq_rows > 0 && a_ineq.cols() != nv) {
      throw Error(ErrorKind::DimensionMismatch, "lp_feasible: column count mismatch");
    }
    nv = a_ineq.cols();
  }
  const std::size_t rows = eq_rows + in_rows;
  if (rows == 0) return true;

  // Columns: x (or x+ | x-), surplus per inequality, artificial per row, rhs.
  const std::size_t nx = nonneg_vars ? nv : 2 * nv;
  const std::size_t structural = nx + in_rows;
  const std::size_t width = structural + rows + 1;
  const std::size_t rhs = width - 1;
  std::vector<double> t(rows * width, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * width + c]; };

  for (std::size_t r = 0; r < rows; ++r) {
    const bool is_eq = r < eq_rows;
    const auto coeffs = is_eq ? a_eq.row(r) : a_ineq.row(r - eq_rows);
    for (std::size_t j = 0; j < nv; ++j) {
      at(r, j) = coeffs[j];
      if (!nonneg_vars) at(r, nv + j) = -coeffs[j];
    }
    if (is_eq) {
      at(r, rhs) = b_eq[r];
    } else {
      at(r, nx + (r - eq_rows)) = -1.0;
      at(r, rhs) = b_ineq[r - eq_rows] - slack;
    }
    if (at(r, rhs) < 0.0) {
      for (std::size_t c = 0; c < width; ++c) at(r, c) = -at(r, c);
    }
    at(r, structural + r) = 1.0;
  }

  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) basis[r] = structural + r;

  // Reduced costs of the phase-1 objective sum(artificials).
  std::vector<double> cost(width, 0.0);
  for (std::size_t c = 0; c < structural; ++c)
    for (std::size_t r = 0; r < rows; ++r) cost[c] -= at(r, c);

  constexpr double kPivotTol = 1e-12;
  const std::size_t max_pivots = 50000;
  for (std::size_t iter = 0; iter < max_pivots; ++iter) {
    std::size_t enter = width;
    for (std::size_t c = 0; c < structural + rows; ++c) {
      if (cost[c] < -kPivotTol) {
        enter = c;  // Bland: lowest index with negative reduced cost.
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = rows;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows; ++r) {
      const double a = at(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = at(r, rhs) / a;
      if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave == rows) break;  // unbounded direction; cannot happen in phase 1

    const double piv = at(leave, enter);
    for (std::size_t c = 0; c < width; ++c) at(leave, c) /= piv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) at(r, c) -= f * at(leave, c);
    }
    const double f = cost[enter];
    for (std::size_t c = 0; c < width; ++c) cost[c] -= f * at(leave, c);
    basis[leave] = enter;
  }

  double infeasibility = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    if (basis[r] >= structural) infeasibility += std::max(0.0, at(r, rhs));
  return infeasibility <= slack;
}

}  // namespace relucert
