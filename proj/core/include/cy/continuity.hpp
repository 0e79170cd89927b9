#pragma once

#include <string>
#include <vector>

#include "cy/elliptic.hpp"
#include "cy/estimates.hpp"

namespace cy {

struct ContinuationOptions {
  double s_step_init = 0.1;
  double s_step_min = 1e-4;
  double s_step_max = 0.25;
  double newton_tol = 1e-10;  // sup norm of F(phi) - A_s e^{sf}
  int newton_max = 30;
  int line_search_max = 20;  // halvings at factor 0.5
  SolveOptions linear;
  bool collect_monitors = true;
};

/// A_s with A_s * int e^{sf} omega^n = int omega^n.
double normalize_A(const ScalarField& f, double s, const MAProblem& prob);

/// Copy of the problem with the path data (s f, A_s) in place of (f, A).
MAProblem problem_at(const MAProblem& prob, double s);

enum class NewtonOutcome { converged, diverged, taming_lost };

struct NewtonReport {
  NewtonOutcome outcome = NewtonOutcome::converged;
  int iterations = 0;
  double residual_inf = 0.0;
  long krylov_total = 0;
};

struct NewtonResult {
  ScalarField phi;
  NewtonReport report;
};

/// Damped Newton at fixed s from a warm start. Accepted iterates stay
/// mean-zero and inside the taming cone (line-search guard); divergence and
/// taming loss are outcomes, not exceptions.
NewtonResult newton_solve_at(double s, const ScalarField& phi_init, const MAProblem& prob,
                             const ContinuationOptions& opts);

struct TraceStep {
  double s = 0;
  double A_s = 1;
  int newton_iters = 0;
  double residual_inf = 0;
  double taming_margin = 0;
  double mass_defect = 0;   // |int F(phi) omega^n - int omega^n| / int omega^n
  double gauge_defect = 0;  // |int phi omega^n|
  EstimateReport est;
};

struct ContinuationTrace {
  std::vector<TraceStep> steps;
  bool success = false;
  bool step_underflow = false;
  std::string diagnosis;
};

struct ContinuationResult {
  ScalarField phi;
  ContinuationTrace trace;
};

/// Path following s: 0 -> 1 of (omega + da)^n = A_s e^{sf} omega^n with the
/// step-doubling/halving policy; returns the partial trace with a diagnosis
/// when the step underflows.
ContinuationResult continuity_solve(const MAProblem& prob, const ContinuationOptions& opts = {});

/// CSV: s, A_s, newton_iters, residual_inf, taming_margin, laplacian_max, S_max
std::string trace_csv(const ContinuationTrace& trace);

}  // namespace cy
