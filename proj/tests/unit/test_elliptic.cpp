#include <cmath>

#include "cy/elliptic.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace cy;
using namespace cytest;

TEST_CASE("zero right-hand side gives zero") {
  TorusGrid g(1, 32);
  MAProblem prob = make_standard_problem(g, ScalarField(g));
  LinearizedOperator L = linearize(ScalarField(g), prob);
  SolveResult r = solve_linearized(L, ScalarField(g));
  CHECK(r.report.converged);
  CHECK(r.u.sup_norm() == 0.0);
}

TEST_CASE("n=1 flat: exact Fourier solution of Laplace problem") {
  TorusGrid g(1, 64);
  MAProblem prob = make_standard_problem(g, ScalarField(g));
  LinearizedOperator L = linearize(ScalarField(g), prob);
  ScalarField rhs =
      sample(g, [](const std::vector<double>& x) { return std::sin(kTwoPi * x[0]); });
  SolveResult r = solve_linearized(L, rhs);
  CHECK(r.report.converged);
  // u = -sin(2 pi x)/(4 pi^2)
  ScalarField want = sample(g, [](const std::vector<double>& x) {
    return -std::sin(kTwoPi * x[0]) / (kTwoPi * kTwoPi);
  });
  double err = 0.0;
  for (std::size_t p = 0; p < g.points(); ++p)
    err = std::max(err, std::fabs(r.u.v[p] - want.v[p]));
  CHECK(err < 1e-12);
  // exact preconditioner: one or two iterations
  CHECK(r.report.iterations <= 2);
}

TEST_CASE("solve-then-apply self consistency at a taming state") {
  Rng rng(101);
  TorusGrid g(2, 16);
  for (int variant = 0; variant < 2; ++variant) {
    ACSField J = variant == 0 ? ACSField::standard(g) : synthetic_compatible_J(g, 7, 0.2);
    MAProblem prob = make_problem(g, J, std_omega_form(g), ScalarField(g));
    ScalarField phi = random_taming_potential(rng, prob);
    REQUIRE(taming_margin(phi, prob) > 0.0);
    LinearizedOperator L = linearize(phi, prob);
    ScalarField rhs = random_band_limited(g, rng, 5, 2, 1.0);
    // make exactly mean-zero against the volume
    double mass = integral_against_volume(rhs);
    for (double& x : rhs.v) x -= mass;
    SolveOptions opts;
    opts.tol_rel = 1e-11;
    SolveResult r = solve_linearized(L, rhs, opts);
    CHECK(r.report.converged);
    ScalarField back = L.apply(r.u);
    double err = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p)
      err = std::max(err, std::fabs(back.v[p] - rhs.v[p]));
    CHECK(err < 1e-8 * std::max(1.0, rhs.sup_norm()));
    // gauge
    CHECK(std::fabs(integral_against_volume(r.u)) * 2.0 < 1e-12);
  }
}

TEST_CASE("kernel behavior: recover a known mean-zero solution") {
  Rng rng(103);
  TorusGrid g(2, 8);
  MAProblem prob = make_standard_problem(g, ScalarField(g));
  ScalarField phi = random_taming_potential(rng, prob);
  LinearizedOperator L = linearize(phi, prob);
  ScalarField v = random_band_limited(g, rng, 4, 2, 1.0);
  double mass = integral_against_volume(v);
  for (double& x : v.v) x -= mass;
  ScalarField rhs = L.apply(v);
  double rm = integral_against_volume(rhs);
  for (double& x : rhs.v) x -= rm;  // kill roundoff mass
  SolveOptions opts;
  opts.tol_rel = 1e-12;
  SolveResult r = solve_linearized(L, rhs, opts);
  CHECK(r.report.converged);
  double err = 0.0;
  for (std::size_t p = 0; p < g.points(); ++p)
    err = std::max(err, std::fabs(r.u.v[p] - v.v[p]));
  CHECK(err < 10.0 * opts.tol_rel * std::max(1.0, v.sup_norm()) * 1e3);
}

TEST_CASE("constant (non-mean-zero) right-hand side is rejected") {
  TorusGrid g(1, 32);
  MAProblem prob = make_standard_problem(g, ScalarField(g));
  LinearizedOperator L = linearize(ScalarField(g), prob);
  ScalarField rhs(g);
  std::fill(rhs.v.begin(), rhs.v.end(), 0.5);
  CHECK_THROWS_AS(solve_linearized(L, rhs), RhsNotMeanZero);
}

TEST_CASE("no-convergence path returns the best iterate with a report") {
  TorusGrid g(2, 8);
  MAProblem prob = make_standard_problem(g, ScalarField(g));
  Rng rng(107);
  ScalarField phi = random_taming_potential(rng, prob);
  LinearizedOperator L = linearize(phi, prob);
  ScalarField rhs = random_band_limited(g, rng, 4, 2, 1.0);
  double mass = integral_against_volume(rhs);
  for (double& x : rhs.v) x -= mass;
  SolveOptions opts;
  opts.tol_rel = 1e-15;  // unreachable
  opts.max_iter = 2;
  SolveResult r = solve_linearized(L, rhs, opts);
  CHECK_FALSE(r.report.converged);
  CHECK(r.report.iterations <= 2);
  CHECK(std::isfinite(r.report.final_residual));
}
