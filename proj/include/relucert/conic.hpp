#pragma once

// Small dense convex solvers used by the bias estimation and by the
// positive-orthant facet test.

#include <cstddef>
#include <span>

#include "relucert/linalg.hpp"

namespace relucert {

/// min <c, d>  subject to  d >= 0, ||D d||_2 <= 1.
///
/// The objective must lie in the row space of D, i.e. c = D^T g for some g
/// in R^n. This always holds for the bias-estimation objective c = D^T x_i
/// and for any D with full column rank.
struct CappedConeProblem {
  RealMatrix D;  // n x k, unit columns
  Vector c;      // length k
  double tol = 1e-9;
  int max_iters = 10000;
};

struct SolveResult {
  double value = 0.0;
  Vector argmin;
  double kkt_residual = 0.0;
  int iterations = 0;
};

/// Exact active-set solve. Since min over (cone ∩ unit ball) of <g, y> equals
/// -||P_K(-g)|| for the cone K = {D d : d >= 0}, the problem reduces to the
/// non-negative least squares projection of -g onto K; the minimiser is the
/// normalised projection.
///
/// Throws NotConverged when the active set loop exceeds max_iters, and
/// InvalidInput when c is not in the row space of D.
SolveResult min_linear_capped_cone(const CappedConeProblem& problem);

struct NnlsResult {
  Vector x;
  int iterations = 0;
  bool converged = false;
};

/// Lawson-Hanson active set method for min ||A x - b|| s.t. x >= 0.
NnlsResult nnls(const RealMatrix& a, std::span<const double> b, int max_iters = 10000);

/// Feasibility of {x : A_eq x = b_eq, A_ineq x >= b_ineq, x >= 0 if
/// nonneg_vars}, decided by a dense phase-1 simplex with Bland's rule. Either
/// constraint block may be empty (0 rows); the non-empty ones fix the number
/// of variables.
bool lp_feasible(const RealMatrix& a_eq, std::span<const double> b_eq, bool nonneg_vars,
                 const RealMatrix& a_ineq, std::span<const double> b_ineq,
                 double slack = 1e-9);

}  // namespace relucert
