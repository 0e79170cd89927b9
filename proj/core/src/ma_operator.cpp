#include "cy/ma_operator.hpp"

#include <cmath>

namespace cy {

double MAProblem::d_omega_defect() const {
  if (omega.degree == grid.dim()) return 0.0;  // top forms are closed
  return d(omega, *eng).sup_norm();
}

double MAProblem::normalization_defect() const {
  double total = 0.0, vol = 0.0;
  const auto& top = omega_top.comp[0];
  for (std::size_t p = 0; p < top.size(); ++p) {
    total += A * std::exp(f.v[p]) * top[p];
    vol += top[p];
  }
  return std::fabs(total - vol) / std::fabs(vol);
}

MAProblem make_problem(const TorusGrid& g, ACSField J, FormField omega, ScalarField f,
                       Scheme scheme) {
  MAProblem prob;
  prob.grid = g;
  prob.J = std::move(J);
  prob.omega = std::move(omega);
  prob.f = std::move(f);
  prob.eng = std::make_shared<DiffEngine>(g, scheme);
  prob.omega_top = prob.omega;
  for (int k = 1; k < g.n; ++k) prob.omega_top = wedge(prob.omega_top, prob.omega);
  prob.omega_total = integrate(prob.omega_top);
  // normalize: A * integral(e^f omega^n) = integral(omega^n)
  double weighted = 0.0;
  for (std::size_t p = 0; p < prob.f.v.size(); ++p)
    weighted += std::exp(prob.f.v[p]) * prob.omega_top.comp[0][p];
  weighted /= static_cast<double>(prob.f.v.size());
  prob.A = prob.omega_total / weighted;
  return prob;
}

MAProblem make_standard_problem(const TorusGrid& g, ScalarField f, Scheme scheme) {
  return make_problem(g, ACSField::standard(g), std_omega_form(g), std::move(f), scheme);
}

FormField omega_phi(const ScalarField& phi, const MAProblem& prob) {
  return prob.omega + dJd(phi, prob.J, *prob.eng);
}

namespace {

/// min over points of the smallest eigenvalue of sym(H_mat * J) where
/// H = P11(beta). For n=1 every 2-form is (1,1) and the matrix is 1x1.
double margin_of(const FormField& beta, const ACSField& Jf) {
  const TorusGrid& g = beta.grid;
  const int dim = g.dim();
  double worst = 1e300;
  if (dim == 2) {
    // H(., J.) = beta_{01} * g0; smallest eigenvalue is the coefficient
    for (std::size_t p = 0; p < g.points(); ++p) {
      const double* J = Jf.at(p);
      // sym(B J): B = [[0,b],[-b,0]], BJ = b*[[J10, J11],[-J00, -J01]]
      double b = beta.comp[0][p];
      double m00 = b * J[1 * 2 + 0];
      double m11 = -b * J[0 * 2 + 1];
      double m01 = 0.5 * (b * J[1 * 2 + 1] - b * J[0 * 2 + 0]);
      double tr = 0.5 * (m00 + m11);
      double det = m00 * m11 - m01 * m01;
      double disc = std::sqrt(std::max(0.0, tr * tr - det));
      worst = std::min(worst, tr - disc);
    }
    return worst;
  }
  std::vector<double> B(dim * dim), M(dim * dim), S(dim * dim);
  for (std::size_t p = 0; p < g.points(); ++p) {
    beta.matrix_at(p, B.data());
    const double* J = Jf.at(p);
    // P11 part: (B + J^T B J)/2, then right-multiply by J and symmetrize
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double s = 0.0;
        for (int r = 0; r < dim; ++r) {
          double jri = J[r * dim + i];
          if (jri == 0.0) continue;
          for (int c = 0; c < dim; ++c) s += jri * B[r * dim + c] * J[c * dim + j];
        }
        M[i * dim + j] = 0.5 * (B[i * dim + j] + s);
      }
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += M[i * dim + k] * J[k * dim + j];
        S[i * dim + j] = s;
      }
    Mat sym(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) sym(i, j) = 0.5 * (S[i * dim + j] + S[j * dim + i]);
    worst = std::min(worst, min_eigenvalue_sym(sym));
  }
  return worst;
}

ScalarField wedge_ratio(const FormField& beta, int power, const MAProblem& prob) {
  FormField top = beta;
  for (int k = 1; k < power; ++k) top = wedge(top, beta);
  ScalarField out(prob.grid);
  const auto& denom = prob.omega_top.comp[0];
  for (std::size_t p = 0; p < out.v.size(); ++p) out.v[p] = top.comp[0][p] / denom[p];
  return out;
}

}  // namespace

double taming_margin(const ScalarField& phi, const MAProblem& prob) {
  return margin_of(omega_phi(phi, prob), prob.J);
}

FOpResult F_op(const ScalarField& phi, const MAProblem& prob) {
  FormField w = omega_phi(phi, prob);
  FOpResult out;
  out.value = wedge_ratio(w, prob.grid.n, prob);
  out.margin = margin_of(w, prob.J);
  out.nontaming = !(out.margin > 0.0);
  return out;
}

ScalarField F_det_route(const ScalarField& phi, const MAProblem& prob) {
  if (!prob.J.constant) throw NotElliptic("determinant route requires the flat structure");
  HermitianField h = hermitian_from_two_form(omega_phi(phi, prob));
  ScalarField out(prob.grid);
  const int n = prob.grid.n;
  if (n == 1) {
    for (std::size_t p = 0; p < out.v.size(); ++p) out.v[p] = h.diag[0][p];
  } else {
    for (std::size_t p = 0; p < out.v.size(); ++p)
      out.v[p] = h.diag[0][p] * h.diag[1][p] -
                 (h.low_re[0][p] * h.low_re[0][p] + h.low_im[0][p] * h.low_im[0][p]);
  }
  // ratio against det of omega's Hermitian matrix (identity for omega_std)
  HermitianField h0 = hermitian_from_two_form(prob.omega);
  if (n == 1) {
    for (std::size_t p = 0; p < out.v.size(); ++p) out.v[p] /= h0.diag[0][p];
  } else {
    for (std::size_t p = 0; p < out.v.size(); ++p) {
      double det0 = h0.diag[0][p] * h0.diag[1][p] -
                    (h0.low_re[0][p] * h0.low_re[0][p] + h0.low_im[0][p] * h0.low_im[0][p]);
      out.v[p] /= det0;
    }
  }
  return out;
}

ScalarField F_component(const ScalarField& phi, int j, const MAProblem& prob) {
  const int n = prob.grid.n;
  if (j < 0 || j > n / 2) throw IndexOutOfRange("component index " + std::to_string(j));
  TauH th = tau_H(phi, prob.J, prob.omega, *prob.eng);
  if (j == 0) return wedge_ratio(th.H, n, prob);
  // j = 1, n = 2: F_1 omega^n = 2 tau ^ tau~ = (tau + tau~)^2
  return wedge_ratio(th.tau, 2, prob);
}

LinearizedOperator::LinearizedOperator(const MAProblem& prob, FormField coeff, double margin)
    : prob_(&prob), coeff_(std::move(coeff)), margin_(margin) {}

LinearizedOperator linearize(const ScalarField& phi, const MAProblem& prob) {
  FormField w = omega_phi(phi, prob);
  double margin = margin_of(w, prob.J);
  if (!(margin > 0.0)) throw NotElliptic("taming margin " + std::to_string(margin));
  if (prob.grid.n == 1) return LinearizedOperator(prob, FormField(prob.grid, 0), margin);
  return LinearizedOperator(prob, std::move(w), margin);
}

ScalarField random_taming_potential(Rng& rng, const MAProblem& prob, double amp0,
                                    double target_margin) {
  ScalarField phi = random_band_limited(prob.grid, rng, 4, 2, amp0);
  for (int halvings = 0; halvings < 40; ++halvings) {
    if (taming_margin(phi, prob) > target_margin) return phi;
    for (double& x : phi.v) x *= 0.5;
  }
  throw NotElliptic("could not reach the requested taming margin");
}

ScalarField LinearizedOperator::apply(const ScalarField& u) const {
  const MAProblem& prob = *prob_;
  const int n = prob.grid.n;
  FormField ddc = dJd(u, prob.J, *prob.eng);
  ScalarField out(prob.grid);
  const auto& denom = prob.omega_top.comp[0];
  if (n == 1) {
    for (std::size_t p = 0; p < out.v.size(); ++p) out.v[p] = ddc.comp[0][p] / denom[p];
    return out;
  }
  FormField top = wedge(coeff_, ddc);
  for (std::size_t p = 0; p < out.v.size(); ++p)
    out.v[p] = static_cast<double>(n) * top.comp[0][p] / denom[p];
  return out;
}

}  // namespace cy
