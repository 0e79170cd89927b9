#pragma once

#include <string>
#include <vector>

#include "cy/ma_operator.hpp"

namespace cy {

// Monitors are pure observers of (phi, problem) states: no mutation,
// bitwise-identical on repeated runs.

struct ZeroOrderReport {
  double lp2 = 0, lp4 = 0, lp8 = 0, lp16 = 0, linf = 0;
  double fitted_bound = 0;  // smallest B with ||phi||_p <= B (Cp)^{-n/p} over the ladder
  double fitted_scale = 0;  // the C achieving it
  bool sup_within_fit = true;
};
ZeroOrderReport zero_order_monitor(const ScalarField& phi, const MAProblem& prob);

struct MoserCheck {
  double lhs = 0, rhs = 0, ratio = 0;
};
/// Integration-by-parts inequality on solutions:
/// int |grad |phi|^{p/2}|^2 <= (n p^2 / 4(p-1)) int (1 - A e^f) phi |phi|^{p-2},
/// both sides against omega^n/n!. Throws NotASolution when the equation
/// residual exceeds `residual_tol`.
MoserCheck moser_inequality_check(const ScalarField& phi, const MAProblem& prob, double p,
                                  double residual_tol = 1e-6);

struct SecondOrderReport {
  double laplacian_max = 0;   // max of the geometer's Laplacian (-flat Laplacian)
  double bound_rhs_min = 0;   // min of n - n A^{1/n} e^{f/n}
  double margin = 0;          // min of (bound - laplacian); >= 0 on solutions
  double defect = 0;          // max of (laplacian - bound); <= 0 on solutions
  double h_norm_sup = 0;      // sup_p sqrt(2 sum a_j^2)
  double hinv_norm_sup = 0;   // sup_p sqrt(2 sum a_j^{-2})
};
SecondOrderReport second_order_monitor(const ScalarField& phi, const MAProblem& prob);

struct LaplacianIdentity {
  ScalarField lhs, rhs;
  double defect = 0;  // sup |lhs - rhs|
};
/// Fourth-order identity on solutions (flat background, zero curvature):
/// Delta'(Delta phi) = -Delta f + third-derivative contraction.
LaplacianIdentity laplacian_identity_check(const ScalarField& phi, const MAProblem& prob,
                                           double residual_tol = 1e-6);

/// S >= 0 with S^2 the h(a)-weighted square norm of the third complex
/// derivatives of phi; requires h(a) positive definite pointwise.
ScalarField third_order_S(const ScalarField& phi, const MAProblem& prob);

struct WedgePositivity {
  std::vector<double> g_min;  // min over grid of G_j, j = 0..n-1
  bool taming = true;         // precondition flag: omega(phi) tames J
};
WedgePositivity wedge_positivity(const ScalarField& phi, const MAProblem& prob);

struct PointwiseReport {
  double product_defect = 0;        // max rel |prod a_j - A e^f|
  double norm_defect = 0;           // max rel |da|^2 vs 2 sum (a_j-1)^2
  double laplacian_sum_defect = 0;  // max |(n - sum a_j) - Delta^L phi|
  double min_a = 0;                 // smallest generalized eigenvalue seen
};
PointwiseReport pointwise_identity_scan(const ScalarField& phi, const MAProblem& prob,
                                        double residual_tol = 1e-6);

struct EstimateReport {
  ZeroOrderReport zero;
  double moser_ratio = 0;  // p = 2; NaN when the state is not a solution
  SecondOrderReport second;
  double s_max = 0;
  PointwiseReport pointwise;
  std::vector<double> wedge_min;
};
EstimateReport estimate_report(const ScalarField& phi, const MAProblem& prob);

std::string estimate_csv_header(int n);
std::string estimate_csv_row(const EstimateReport& r);

}  // namespace cy
