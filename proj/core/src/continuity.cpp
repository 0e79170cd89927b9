#include "cy/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cy {

double normalize_A(const ScalarField& f, double s, const MAProblem& prob) {
  const auto& w = prob.omega_top.comp[0];
  double weighted = 0.0, vol = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    weighted += std::exp(s * f.v[i]) * w[i];
    vol += w[i];
  }
  return vol / weighted;
}

MAProblem problem_at(const MAProblem& prob, double s) {
  MAProblem out = prob;
  for (double& x : out.f.v) x *= s;
  out.A = normalize_A(prob.f, s, prob);
  return out;
}

namespace {

void project_mean_zero(ScalarField& phi, const MAProblem& prob) {
  const auto& w = prob.omega_top.comp[0];
  double s = 0.0, vol = 0.0;
  for (std::size_t i = 0; i < phi.v.size(); ++i) {
    s += phi.v[i] * w[i];
    vol += w[i];
  }
  s /= vol;
  for (double& x : phi.v) x -= s;
}

double weighted_mass(const ScalarField& v, const MAProblem& prob) {
  const auto& w = prob.omega_top.comp[0];
  double s = 0.0;
  for (std::size_t i = 0; i < v.v.size(); ++i) s += v.v[i] * w[i];
  return s / static_cast<double>(v.v.size());
}

double residual_inf(const ScalarField& Fval, const ScalarField& rhs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < Fval.v.size(); ++i)
    worst = std::max(worst, std::fabs(Fval.v[i] - rhs.v[i]));
  return worst;
}

}  // namespace

NewtonResult newton_solve_at(double s, const ScalarField& phi_init, const MAProblem& prob,
                             const ContinuationOptions& opts) {
  const TorusGrid& g = prob.grid;
  double A_s = normalize_A(prob.f, s, prob);
  ScalarField rhs(g);
  for (std::size_t i = 0; i < rhs.v.size(); ++i) rhs.v[i] = A_s * std::exp(s * prob.f.v[i]);

  NewtonResult out;
  out.phi = phi_init;
  project_mean_zero(out.phi, prob);

  FOpResult F = F_op(out.phi, prob);
  if (!(F.margin > 0.0)) {
    out.report.outcome = NewtonOutcome::taming_lost;
    out.report.residual_inf = residual_inf(F.value, rhs);
    return out;
  }
  double res = residual_inf(F.value, rhs);
  out.report.residual_inf = res;

  while (res > opts.newton_tol) {
    if (out.report.iterations >= opts.newton_max) {
      out.report.outcome = NewtonOutcome::diverged;
      return out;
    }
    LinearizedOperator L = linearize(out.phi, prob);
    ScalarField rho(g);
    for (std::size_t i = 0; i < rho.v.size(); ++i) rho.v[i] = rhs.v[i] - F.value.v[i];
    // the residual is mean-zero up to roundoff (divergence structure);
    // project before the solve to stop drift
    project_mean_zero(rho, prob);
    SolveOptions lin = opts.linear;
    if (lin.tol_rel <= 0.0) lin.tol_rel = 1e-10;
    // inexact-Newton forcing keeps early solves cheap
    lin.tol_rel = std::max(1e-12, std::min(lin.tol_rel, 1e-2 * res));
    SolveResult sol = solve_linearized(L, rho, lin);
    out.report.krylov_total += sol.report.iterations;

    double lambda = 1.0;
    bool accepted = false;
    bool taming_blocked = false;
    for (int ls = 0; ls <= opts.line_search_max; ++ls) {
      ScalarField trial(g);
      for (std::size_t i = 0; i < trial.v.size(); ++i)
        trial.v[i] = out.phi.v[i] + lambda * sol.u.v[i];
      project_mean_zero(trial, prob);
      FOpResult Ft = F_op(trial, prob);
      if (!(Ft.margin > 0.0)) {
        taming_blocked = true;
        lambda *= 0.5;
        continue;
      }
      double rest = residual_inf(Ft.value, rhs);
      if (rest < res) {
        out.phi = std::move(trial);
        F = std::move(Ft);
        res = rest;
        accepted = true;
        break;
      }
      taming_blocked = false;
      lambda *= 0.5;
    }
    if (!accepted) {
      out.report.outcome =
          taming_blocked ? NewtonOutcome::taming_lost : NewtonOutcome::diverged;
      out.report.residual_inf = res;
      return out;
    }
    ++out.report.iterations;
    out.report.residual_inf = res;
  }
  out.report.outcome = NewtonOutcome::converged;
  return out;
}

ContinuationResult continuity_solve(const MAProblem& prob, const ContinuationOptions& opts) {
  ContinuationResult out;
  out.phi = ScalarField(prob.grid);
  ContinuationTrace& trace = out.trace;

  auto record = [&](double s, const NewtonReport& rep) {
    MAProblem path = problem_at(prob, s);
    TraceStep st;
    st.s = s;
    st.A_s = path.A;
    st.newton_iters = rep.iterations;
    st.residual_inf = rep.residual_inf;
    FOpResult F = F_op(out.phi, path);
    st.taming_margin = F.margin;
    double mass = 0.0, vol = 0.0;
    const auto& w = path.omega_top.comp[0];
    for (std::size_t i = 0; i < F.value.v.size(); ++i) {
      mass += F.value.v[i] * w[i];
      vol += w[i];
    }
    st.mass_defect = std::fabs(mass - vol) / std::fabs(vol);
    double fact = 1.0;
    for (int k = 2; k <= prob.grid.n; ++k) fact *= k;
    st.gauge_defect = std::fabs(weighted_mass(out.phi, path)) * fact;
    if (opts.collect_monitors) st.est = estimate_report(out.phi, path);
    trace.steps.push_back(std::move(st));
  };

  // s = 0: F(0) = 1 = A_0 exactly, zero iterations from phi = 0
  NewtonResult first = newton_solve_at(0.0, out.phi, prob, opts);
  if (first.report.outcome != NewtonOutcome::converged) {
    trace.diagnosis = "failed at s = 0";
    return out;
  }
  out.phi = first.phi;
  record(0.0, first.report);

  double s = 0.0;
  double step = std::min(opts.s_step_init, opts.s_step_max);
  int consecutive_fast = 0;
  while (s < 1.0) {
    double s_try = std::min(1.0, s + step);
    NewtonResult nr = newton_solve_at(s_try, out.phi, prob, opts);
    if (nr.report.outcome == NewtonOutcome::converged) {
      s = s_try;
      out.phi = nr.phi;
      record(s, nr.report);
      consecutive_fast = (nr.report.iterations <= 1) ? consecutive_fast + 1 : 0;
      if (consecutive_fast >= 2) {
        step = std::min(2.0 * step, opts.s_step_max);
        consecutive_fast = 0;
      }
    } else {
      consecutive_fast = 0;
      step *= 0.5;
      if (step < opts.s_step_min) {
        trace.step_underflow = true;
        std::ostringstream os;
        os << "step underflow at s = " << s << " (next target " << s_try << ", "
           << (nr.report.outcome == NewtonOutcome::taming_lost ? "taming lost"
                                                               : "newton diverged")
           << ", residual " << nr.report.residual_inf << ")";
        trace.diagnosis = os.str();
        return out;
      }
    }
  }
  trace.success = true;
  return out;
}

std::string trace_csv(const ContinuationTrace& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "s,A_s,newton_iters,residual_inf,taming_margin,laplacian_max,S_max\n";
  for (const auto& st : trace.steps)
    os << st.s << ',' << st.A_s << ',' << st.newton_iters << ',' << st.residual_inf << ','
       << st.taming_margin << ',' << st.est.second.laplacian_max << ',' << st.est.s_max << '\n';
  return os.str();
}

}  // namespace cy
