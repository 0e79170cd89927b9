#include "cy/estimates.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace cy {

namespace {

/// weighted integral against omega^n/n! (plain mean for the standard form)
double vol_integral(const std::vector<double>& v, const MAProblem& prob) {
  const auto& w = prob.omega_top.comp[0];
  double fact = 1.0;
  for (int k = 2; k <= prob.grid.n; ++k) fact *= k;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * w[i];
  return s / (fact * static_cast<double>(v.size()));
}

double equation_residual(const ScalarField& phi, const MAProblem& prob) {
  FOpResult F = F_op(phi, prob);
  double worst = 0.0;
  for (std::size_t i = 0; i < F.value.v.size(); ++i)
    worst = std::max(worst, std::fabs(F.value.v[i] - prob.A * std::exp(prob.f.v[i])));
  return worst;
}

/// eigenvalues of the pointwise Hermitian matrix h(a) = I + hess at p
void eigen_ha(const HermitianField& hess, std::size_t p, int n, double* a) {
  if (n == 1) {
    a[0] = 1.0 + hess.diag[0][p];
    return;
  }
  double d0 = 1.0 + hess.diag[0][p];
  double d1 = 1.0 + hess.diag[1][p];
  double off2 = hess.low_re[0][p] * hess.low_re[0][p] + hess.low_im[0][p] * hess.low_im[0][p];
  double tr = 0.5 * (d0 + d1);
  double disc = std::sqrt(std::max(0.0, 0.25 * (d0 - d1) * (d0 - d1) + off2));
  a[0] = tr - disc;
  a[1] = tr + disc;
}

}  // namespace

ZeroOrderReport zero_order_monitor(const ScalarField& phi, const MAProblem& prob) {
  ZeroOrderReport r;
  // norms against the unit-mass volume omega^n / (n! vol); weights reduce to
  // plain means on the standard background
  const auto& w = prob.omega_top.comp[0];
  double wsum = 0.0;
  for (double x : w) wsum += x;
  auto lp = [&](double p) {
    double s = 0.0;
    for (std::size_t i = 0; i < phi.v.size(); ++i) s += std::pow(std::fabs(phi.v[i]), p) * w[i];
    return std::pow(s / wsum, 1.0 / p);
  };
  r.lp2 = lp(2);
  r.lp4 = lp(4);
  r.lp8 = lp(8);
  r.lp16 = lp(16);
  r.linf = phi.sup_norm();
  if (r.linf == 0.0) {
    r.fitted_bound = 0.0;
    r.fitted_scale = 1.0;
    r.sup_within_fit = true;
    return r;
  }
  // fit (B, C): minimize over C the max over the ladder of ||phi||_p (Cp)^{n/p}
  const double ps[4] = {2, 4, 8, 16};
  const double norms[4] = {r.lp2, r.lp4, r.lp8, r.lp16};
  auto bound_for = [&](double c) {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
      worst = std::max(worst, norms[i] * std::pow(c * ps[i], prob.grid.n / ps[i]));
    return worst;
  };
  double lo = std::log(1e-3), hi = std::log(1e3);
  for (int it = 0; it < 200; ++it) {
    double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (bound_for(std::exp(m1)) < bound_for(std::exp(m2)))
      hi = m2;
    else
      lo = m1;
  }
  r.fitted_scale = std::exp(0.5 * (lo + hi));
  r.fitted_bound = bound_for(r.fitted_scale);
  r.sup_within_fit = r.linf <= r.fitted_bound * (1.0 + 1e-6);
  return r;
}

MoserCheck moser_inequality_check(const ScalarField& phi, const MAProblem& prob, double p,
                                  double residual_tol) {
  if (p < 2.0) throw ParameterOutOfRange("moser check needs p >= 2");
  double res = equation_residual(phi, prob);
  if (res > residual_tol)
    throw NotASolution("equation residual " + std::to_string(res));
  const DiffEngine& eng = *prob.eng;
  auto grads = eng.gradient(phi.v);
  const std::size_t N = phi.v.size();
  std::vector<double> lhs_field(N), rhs_field(N);
  for (std::size_t i = 0; i < N; ++i) {
    double g2 = 0.0;
    for (const auto& gcomp : grads) g2 += gcomp[i] * gcomp[i];
    double absphi = std::fabs(phi.v[i]);
    double pw = (p == 2.0) ? 1.0 : std::pow(absphi, p - 2.0);
    lhs_field[i] = 0.25 * p * p * pw * g2;  // |grad |phi|^{p/2}|^2
    rhs_field[i] = (1.0 - prob.A * std::exp(prob.f.v[i])) * phi.v[i] * pw;
  }
  MoserCheck out;
  out.lhs = vol_integral(lhs_field, prob);
  double n = prob.grid.n;
  out.rhs = (n * p * p / (4.0 * (p - 1.0))) * vol_integral(rhs_field, prob);
  if (out.rhs != 0.0)
    out.ratio = out.lhs / out.rhs;
  else
    out.ratio = (out.lhs == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
  return out;
}

SecondOrderReport second_order_monitor(const ScalarField& phi, const MAProblem& prob) {
  SecondOrderReport r;
  const DiffEngine& eng = *prob.eng;
  const int n = prob.grid.n;
  std::vector<double> lap = eng.laplacian(phi.v);
  HermitianField hess = hermitian_hessian(phi, eng);
  double lap_max = -1e300, bound_min = 1e300, margin = 1e300, defect = -1e300;
  double hsup = 0.0, hinvsup = 0.0;
  double a[2];
  for (std::size_t i = 0; i < phi.v.size(); ++i) {
    double dl = -lap[i];  // geometer's Laplacian
    double bound = n - n * std::pow(prob.A, 1.0 / n) * std::exp(prob.f.v[i] / n);
    lap_max = std::max(lap_max, dl);
    bound_min = std::min(bound_min, bound);
    margin = std::min(margin, bound - dl);
    defect = std::max(defect, dl - bound);
    eigen_ha(hess, i, n, a);
    double hn = 0.0, hi = 0.0;
    for (int j = 0; j < n; ++j) {
      hn += 2.0 * a[j] * a[j];
      if (a[j] > 0.0) hi += 2.0 / (a[j] * a[j]);
    }
    hsup = std::max(hsup, std::sqrt(hn));
    hinvsup = std::max(hinvsup, std::sqrt(hi));
  }
  r.laplacian_max = lap_max;
  r.bound_rhs_min = bound_min;
  r.margin = margin;
  r.defect = defect;
  r.h_norm_sup = hsup;
  r.hinv_norm_sup = hinvsup;
  return r;
}

namespace {

/// Per-point third-derivative contractions in the h(a)-eigenbasis.
/// Fills S^2 (all three indices weighted by 1/a) and the mixed contraction
/// with h(0)^{-1} = I on the first index pair (the identity's right side).
void third_order_scan(const ScalarField& phi, const MAProblem& prob, std::vector<double>& s2,
                      std::vector<double>& mixed) {
  const DiffEngine& eng = *prob.eng;
  const int n = prob.grid.n;
  const std::size_t N = phi.v.size();
  HermitianField hess = hermitian_hessian(phi, eng);
  s2.assign(N, 0.0);
  mixed.assign(N, 0.0);

  if (n == 1) {
    CField t = eng.complex_deriv(phi.v, {0, 0}, {0});
    for (std::size_t i = 0; i < N; ++i) {
      double a = 1.0 + hess.diag[0][i];
      if (a <= 0.0) throw NotPositiveDefinite("h(a) at a grid point");
      double t2 = 16.0 * (t.re[i] * t.re[i] + t.im[i] * t.im[i]);  // |4 dz dz~ dz phi|^2
      s2[i] = t2 / (a * a * a);
      mixed[i] = t2 / (a * a);
    }
    return;
  }

  // n = 2: T3[alpha][beta][gamma] = 4 d^3 phi / dz_a dz~_b dz_g, sym in (a,g)
  CField t3[2][2][2];
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be)
      for (int ga = al; ga < 2; ++ga) t3[al][be][ga] = eng.complex_deriv(phi.v, {al, ga}, {be});

  for (std::size_t i = 0; i < N; ++i) {
    // eigen-decompose ha = I + hess: closed-form 2x2 Hermitian
    double d0 = 1.0 + hess.diag[0][i], d1 = 1.0 + hess.diag[1][i];
    cplx off(hess.low_re[0][i], hess.low_im[0][i]);  // ha[1][0]
    double tr = 0.5 * (d0 + d1);
    double disc = std::sqrt(std::max(0.0, 0.25 * (d0 - d1) * (d0 - d1) + std::norm(off)));
    double a0 = tr - disc, a1 = tr + disc;
    if (a0 <= 0.0) throw NotPositiveDefinite("h(a) at a grid point");
    // unitary eigenvectors: columns q0, q1
    cplx q[2][2];
    if (std::abs(off) < 1e-14 * std::max(1.0, tr)) {
      bool swap = d0 > d1;  // ascending order
      q[0][0] = swap ? 0.0 : 1.0;
      q[1][0] = swap ? 1.0 : 0.0;
      q[0][1] = swap ? 1.0 : 0.0;
      q[1][1] = swap ? 0.0 : 1.0;
    } else {
      // (ha - a0) v = 0 -> v = (a0 - d1, off)
      cplx v0(a0 - d1, 0.0);
      cplx v1 = off;
      double nrm = std::sqrt(std::norm(v0) + std::norm(v1));
      q[0][0] = v0 / nrm;
      q[1][0] = v1 / nrm;
      // orthogonal complement
      q[0][1] = -std::conj(v1) / nrm;
      q[1][1] = std::conj(v0) / nrm;
    }
    double aval[2] = {a0, a1};
    auto T = [&](int al, int be, int ga) -> cplx {
      if (al > ga) std::swap(al, ga);
      return cplx(4.0 * t3[al][be][ga].re[i], 4.0 * t3[al][be][ga].im[i]);
    };
    double s2v = 0.0, mixedv = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          // transformed T~[a][b][c] = sum Q[al][a] conj(Q[be][b]) Q[ga][c] T3
          cplx acc(0, 0);
          for (int al = 0; al < 2; ++al)
            for (int be = 0; be < 2; ++be)
              for (int ga = 0; ga < 2; ++ga)
                acc += q[al][a] * std::conj(q[be][b]) * q[ga][c] * T(al, be, ga);
          double m2 = std::norm(acc);
          s2v += m2 / (aval[a] * aval[b] * aval[c]);
          mixedv += m2 / (aval[b] * aval[c]);
        }
    s2[i] = s2v;
    mixed[i] = mixedv;
  }
}

}  // namespace

ScalarField third_order_S(const ScalarField& phi, const MAProblem& prob) {
  std::vector<double> s2, mixed;
  third_order_scan(phi, prob, s2, mixed);
  ScalarField out(prob.grid);
  for (std::size_t i = 0; i < s2.size(); ++i) out.v[i] = std::sqrt(std::max(0.0, s2[i]));
  return out;
}

LaplacianIdentity laplacianidentity_check_impl(const ScalarField& phi, const MAProblem& prob) {
  const DiffEngine& eng = *prob.eng;
  const int n = prob.grid.n;
  const std::size_t N = phi.v.size();
  std::vector<double> lap_phi = eng.laplacian(phi.v);
  std::vector<double> psi(N);
  for (std::size_t i = 0; i < N; ++i) psi[i] = -lap_phi[i];  // Delta^L phi
  HermitianField psi_hess = hermitian_hessian(ScalarField(prob.grid, psi), eng);
  HermitianField hess = hermitian_hessian(phi, eng);
  std::vector<double> lap_f = eng.laplacian(prob.f.v);
  std::vector<double> s2, mixed;
  third_order_scan(phi, prob, s2, mixed);

  LaplacianIdentity out;
  out.lhs = ScalarField(prob.grid);
  out.rhs = ScalarField(prob.grid);
  for (std::size_t i = 0; i < N; ++i) {
    // Delta'^L psi = -tr(ha^{-1} hess4(psi))
    double lhs;
    if (n == 1) {
      double a = 1.0 + hess.diag[0][i];
      lhs = -psi_hess.diag[0][i] / a;
    } else {
      double d0 = 1.0 + hess.diag[0][i], d1 = 1.0 + hess.diag[1][i];
      cplx l(hess.low_re[0][i], hess.low_im[0][i]);
      double det = d0 * d1 - std::norm(l);
      cplx m10(psi_hess.low_re[0][i], psi_hess.low_im[0][i]);
      double tr_inv_m = (d1 * psi_hess.diag[0][i] + d0 * psi_hess.diag[1][i] -
                         2.0 * (std::conj(l) * m10).real()) /
                        det;
      lhs = -tr_inv_m;
    }
    out.lhs.v[i] = lhs;
    out.rhs.v[i] = lap_f[i] + mixed[i];  // -Delta^L f + contraction
  }
  double defect = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    defect = std::max(defect, std::fabs(out.lhs.v[i] - out.rhs.v[i]));
  out.defect = defect;
  return out;
}

LaplacianIdentity laplacian_identity_check(const ScalarField& phi, const MAProblem& prob,
                                           double residual_tol) {
  double res = equation_residual(phi, prob);
  if (res > residual_tol) throw NotASolution("equation residual " + std::to_string(res));
  return laplacianidentity_check_impl(phi, prob);
}

WedgePositivity wedge_positivity(const ScalarField& phi, const MAProblem& prob) {
  const DiffEngine& eng = *prob.eng;
  const int n = prob.grid.n;
  WedgePositivity out;
  FormField w_phi = omega_phi(phi, prob);
  out.taming = taming_margin(phi, prob) > 0.0;
  FormField dphi = d(phi, eng);
  FormField jd = apply_J_to_form(dphi, prob.J);
  FormField base = wedge(dphi, jd);
  const auto& denom = prob.omega_top.comp[0];
  for (int j = 0; j <= n - 1; ++j) {
    // d phi ^ J d phi ^ omega^{n-1-j} ^ omega(phi)^j
    FormField top = base;
    for (int k = 0; k < n - 1 - j; ++k) top = wedge(top, prob.omega);
    for (int k = 0; k < j; ++k) top = wedge(top, w_phi);
    double mn = 1e300;
    for (std::size_t i = 0; i < denom.size(); ++i) mn = std::min(mn, top.comp[0][i] / denom[i]);
    out.g_min.push_back(mn);
  }
  return out;
}

PointwiseReport pointwise_identity_scan(const ScalarField& phi, const MAProblem& prob,
                                        double residual_tol) {
  double res = equation_residual(phi, prob);
  if (res > residual_tol) throw NotASolution("equation residual " + std::to_string(res));
  const DiffEngine& eng = *prob.eng;
  const int n = prob.grid.n;
  const std::size_t N = phi.v.size();
  HermitianField hess = hermitian_hessian(phi, eng);
  // independent route for |da|^2: the exterior-calculus path d(J d phi)
  FormField da = d(apply_J_to_form(d(phi, eng), prob.J), eng);
  HermitianField da_h = hermitian_from_two_form(da);
  std::vector<double> lap = eng.laplacian(phi.v);

  PointwiseReport r;
  r.min_a = 1e300;
  double a[2];
  for (std::size_t i = 0; i < N; ++i) {
    eigen_ha(hess, i, n, a);
    double prod = 1.0, sum = 0.0, sqsum = 0.0;
    for (int j = 0; j < n; ++j) {
      prod *= a[j];
      sum += a[j];
      sqsum += 2.0 * (a[j] - 1.0) * (a[j] - 1.0);
      r.min_a = std::min(r.min_a, a[j]);
    }
    double rhs = prob.A * std::exp(prob.f.v[i]);
    r.product_defect = std::max(r.product_defect, std::fabs(prod - rhs) / std::fabs(rhs));
    // |da|^2 with h(0) = I: 2 * Frobenius^2 of the Hermitian matrix of da
    double fro = 0.0;
    for (int j = 0; j < n; ++j) fro += da_h.diag[j][i] * da_h.diag[j][i];
    if (n == 2)
      fro += 2.0 * (da_h.low_re[0][i] * da_h.low_re[0][i] + da_h.low_im[0][i] * da_h.low_im[0][i]);
    double danorm = 2.0 * fro;
    r.norm_defect =
        std::max(r.norm_defect, std::fabs(danorm - sqsum) / std::max(1.0, std::fabs(sqsum)));
    r.laplacian_sum_defect =
        std::max(r.laplacian_sum_defect, std::fabs((n - sum) - (-lap[i])));
  }
  return r;
}

EstimateReport estimate_report(const ScalarField& phi, const MAProblem& prob) {
  EstimateReport r;
  r.zero = zero_order_monitor(phi, prob);
  double res = equation_residual(phi, prob);
  bool is_solution = res <= 1e-6;
  if (is_solution) {
    r.moser_ratio = moser_inequality_check(phi, prob, 2.0).ratio;
    r.pointwise = pointwise_identity_scan(phi, prob);
  } else {
    r.moser_ratio = std::numeric_limits<double>::quiet_NaN();
    r.pointwise.product_defect = std::numeric_limits<double>::quiet_NaN();
    r.pointwise.norm_defect = std::numeric_limits<double>::quiet_NaN();
    r.pointwise.laplacian_sum_defect = std::numeric_limits<double>::quiet_NaN();
  }
  r.second = second_order_monitor(phi, prob);
  ScalarField S = third_order_S(phi, prob);
  r.s_max = S.sup_norm();
  WedgePositivity wp = wedge_positivity(phi, prob);
  r.wedge_min = wp.g_min;
  return r;
}

std::string estimate_csv_header(int n) {
  std::string h =
      "lp2,lp4,lp8,lp16,linf,fitted_bound,fitted_scale,moser_ratio,laplacian_max,bound_rhs_min,"
      "second_margin,h_norm_sup,hinv_norm_sup,s_max,product_defect,norm_defect,"
      "laplacian_sum_defect";
  for (int j = 0; j < n; ++j) h += ",g" + std::to_string(j) + "_min";
  return h;
}

std::string estimate_csv_row(const EstimateReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.zero.lp2 << ',' << r.zero.lp4 << ',' << r.zero.lp8 << ',' << r.zero.lp16 << ','
     << r.zero.linf << ',' << r.zero.fitted_bound << ',' << r.zero.fitted_scale << ','
     << r.moser_ratio << ',' << r.second.laplacian_max << ',' << r.second.bound_rhs_min << ','
     << r.second.margin << ',' << r.second.h_norm_sup << ',' << r.second.hinv_norm_sup << ','
     << r.s_max << ',' << r.pointwise.product_defect << ',' << r.pointwise.norm_defect << ','
     << r.pointwise.laplacian_sum_defect;
  for (double g : r.wedge_min) os << ',' << g;
  return os.str();
}

}  // namespace cy
