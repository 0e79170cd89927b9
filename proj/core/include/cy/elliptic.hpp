#pragma once

#include "cy/ma_operator.hpp"

namespace cy {

enum class Preconditioner { none, fourier_laplacian };

struct SolveOptions {
  double tol_rel = 1e-10;
  long max_iter = 0;  // 0: defaults to 10 * grid points
  Preconditioner preconditioner = Preconditioner::fourier_laplacian;
};

struct SolveReport {
  long iterations = 0;
  double final_residual = 0.0;  // relative L2
  bool converged = false;
  int restarts = 0;
};

struct SolveResult {
  ScalarField u;
  SolveReport report;
};

/// Solve L(phi) u = rhs on the mean-zero subspace by restarted BiCGStab
/// with the flat-Laplacian Fourier preconditioner (exact inverse at phi=0).
/// rhs must integrate to zero against omega^n; NoConvergence is reported,
/// not thrown, and the best iterate is returned.
SolveResult solve_linearized(const LinearizedOperator& Lop, const ScalarField& rhs,
                             const SolveOptions& opts = {});

}  // namespace cy
