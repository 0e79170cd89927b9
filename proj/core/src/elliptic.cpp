#include "cy/elliptic.hpp"

#include <cmath>

namespace cy {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void subtract_weighted_mean(std::vector<double>& v, const std::vector<double>& weight,
                            double weight_total) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * weight[i];
  s /= weight_total;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= s;
}

}  // namespace

SolveResult solve_linearized(const LinearizedOperator& Lop, const ScalarField& rhs,
                             const SolveOptions& opts) {
  const MAProblem& prob = Lop.problem();
  const TorusGrid& g = prob.grid;
  const std::size_t N = g.points();
  const double vol_total = prob.omega_total * static_cast<double>(N);
  const auto& wtop = prob.omega_top.comp[0];

  double rhs_mass = 0.0;
  for (std::size_t i = 0; i < N; ++i) rhs_mass += rhs.v[i] * wtop[i];
  rhs_mass /= static_cast<double>(N);
  double rhs_scale = rhs.sup_norm();
  if (std::fabs(rhs_mass) > 1e-8 * std::max(rhs_scale, 1e-30))
    throw RhsNotMeanZero("mass " + std::to_string(rhs_mass));

  SolveResult res;
  res.u = ScalarField(g);
  if (rhs_scale == 0.0) {
    res.report.converged = true;
    return res;
  }

  long max_iter = opts.max_iter > 0 ? opts.max_iter : static_cast<long>(10 * N);
  const DiffEngine& eng = *prob.eng;

  auto precond = [&](const std::vector<double>& v) {
    std::vector<double> out;
    if (opts.preconditioner == Preconditioner::fourier_laplacian)
      out = eng.inv_laplacian_mean_zero(v);
    else
      out = v;
    // re-project after every preconditioner application to stop drift
    subtract_weighted_mean(out, wtop, vol_total);
    return out;
  };
  auto apply = [&](const std::vector<double>& v) {
    ScalarField tmp(g, v);
    return Lop.apply(tmp).v;
  };

  std::vector<double> x(N, 0.0);
  std::vector<double> r = rhs.v;
  const double bnorm = norm2(r);
  std::vector<double> rhat = r;
  std::vector<double> p(N, 0.0), v(N, 0.0), best_x = x;
  double best_res = 1.0;
  double rho = 1.0, alpha = 1.0, w = 1.0;
  long iter = 0;
  int restarts = 0;

  while (iter < max_iter) {
    double rho_new = dot(rhat, r);
    if (std::fabs(rho_new) < 1e-300 * bnorm * bnorm) {
      // breakdown: restart from the current iterate
      r = rhs.v;
      std::vector<double> lx = apply(x);
      axpy(r, -1.0, lx);
      rhat = r;
      p.assign(N, 0.0);
      v.assign(N, 0.0);
      rho = alpha = w = 1.0;
      ++restarts;
      if (restarts > 8) break;
      rho_new = dot(rhat, r);
      if (std::fabs(rho_new) < 1e-300 * bnorm * bnorm) break;
    }
    double beta = (rho_new / rho) * (alpha / w);
    rho = rho_new;
    for (std::size_t i = 0; i < N; ++i) p[i] = r[i] + beta * (p[i] - w * v[i]);
    std::vector<double> phat = precond(p);
    v = apply(phat);
    double rv = dot(rhat, v);
    if (std::fabs(rv) < 1e-300 * bnorm * bnorm) {
      ++restarts;
      if (restarts > 8) break;
      rhat = r;
      continue;
    }
    alpha = rho / rv;
    std::vector<double> s = r;
    axpy(s, -alpha, v);
    ++iter;
    if (norm2(s) <= opts.tol_rel * bnorm) {
      axpy(x, alpha, phat);
      r = s;
      break;
    }
    std::vector<double> shat = precond(s);
    std::vector<double> t = apply(shat);
    double tt = dot(t, t);
    w = tt > 0.0 ? dot(t, s) / tt : 0.0;
    axpy(x, alpha, phat);
    axpy(x, w, shat);
    r = s;
    axpy(r, -w, t);
    double rel = norm2(r) / bnorm;
    if (rel < best_res) {
      best_res = rel;
      best_x = x;
    }
    if (rel <= opts.tol_rel) break;
    if (w == 0.0) {
      ++restarts;
      if (restarts > 8) break;
      rhat = r;
      rho = alpha = w = 1.0;
      p.assign(N, 0.0);
      v.assign(N, 0.0);
    }
  }

  double final_rel = norm2(r) / bnorm;
  if (final_rel > best_res) {
    x = best_x;
    final_rel = best_res;
  }
  // gauge: returned iterate is mean-zero against omega^n
  subtract_weighted_mean(x, wtop, vol_total);
  res.u = ScalarField(g, std::move(x));
  res.report.iterations = iter;
  res.report.final_residual = final_rel;
  res.report.converged = final_rel <= opts.tol_rel;
  res.report.restarts = restarts;
  return res;
}

}  // namespace cy
