#include "cy/point_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cy {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::operator+(const Mat& o) const {
  Mat out(r_, c_);
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] + o.a_[i];
  return out;
}

Mat Mat::operator-(const Mat& o) const {
  Mat out(r_, c_);
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - o.a_[i];
  return out;
}

Mat Mat::operator*(const Mat& o) const {
  if (c_ != o.r_) throw DimensionMismatch("matrix product");
  Mat out(r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < o.c_; ++j) out(i, j) += aik * o(k, j);
    }
  return out;
}

Mat Mat::operator*(double s) const {
  Mat out(r_, c_);
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] * s;
  return out;
}

Mat Mat::transposed() const {
  Mat out(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

double Mat::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::fabs(x));
  return m;
}

double Mat::frobenius() const {
  double s = 0.0;
  for (double x : a_) s += x * x;
  return std::sqrt(s);
}

SymEig sym_eigen(const Mat& a) {
  if (!a.is_square()) throw DimensionMismatch("sym_eigen needs a square matrix");
  const int n = a.rows();
  Mat m = a;
  Mat v = Mat::identity(n);
  const double scale = std::max(m.max_abs(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::fabs(m(p, q)));
    if (off <= 1e-15 * scale) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = m(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  SymEig out;
  out.w.resize(n);
  for (int i = 0; i < n; ++i) out.w[i] = m(i, i);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return out.w[i] < out.w[j]; });
  SymEig sorted;
  sorted.w.resize(n);
  sorted.v = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    sorted.w[j] = out.w[order[j]];
    for (int i = 0; i < n; ++i) sorted.v(i, j) = v(i, order[j]);
  }
  return sorted;
}

double min_eigenvalue_sym(const Mat& a) { return sym_eigen(a).w.front(); }

Mat inverse(const Mat& a) {
  if (!a.is_square()) throw DimensionMismatch("inverse needs a square matrix");
  const int n = a.rows();
  Mat m = a;
  Mat inv = Mat::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(m(r, col)) > std::fabs(m(piv, col))) piv = r;
    if (std::fabs(m(piv, col)) < 1e-300) throw Error("singular matrix in inverse()");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    double d = 1.0 / m(col, col);
    for (int j = 0; j < n; ++j) {
      m(col, j) *= d;
      inv(col, j) *= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = m(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        m(r, j) -= f * m(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

Mat std_omega(int n) {
  Mat w(2 * n, 2 * n);
  for (int p = 0; p < n; ++p) {
    w(2 * p, 2 * p + 1) = 1.0;
    w(2 * p + 1, 2 * p) = -1.0;
  }
  return w;
}

Mat std_J(int n) {
  Mat j(2 * n, 2 * n);
  for (int p = 0; p < n; ++p) {
    j(2 * p + 1, 2 * p) = 1.0;   // J e_x = e_y
    j(2 * p, 2 * p + 1) = -1.0;  // J e_y = -e_x
  }
  return j;
}

namespace {

void validate_pair(const Mat& omega, const Mat& J, double tol) {
  if (!omega.is_square() || !J.is_square() || omega.rows() != J.rows())
    throw DimensionMismatch("omega and J must be square of equal dimension");
  if (omega.rows() % 2 != 0) throw DimensionMismatch("dimension must be even");
  double wscale = std::max(omega.max_abs(), 1e-300);
  if ((omega + omega.transposed()).max_abs() > tol * wscale)
    throw ParameterOutOfRange("omega not antisymmetric");
  Mat j2 = J * J + Mat::identity(J.rows());
  if (j2.max_abs() > tol * std::max(1.0, J.max_abs() * J.max_abs()))
    throw NotAlmostComplex("residual " + std::to_string(j2.max_abs()));
}

Mat sym_part(const Mat& a) { return (a + a.transposed()) * 0.5; }

}  // namespace

CompatibilityCheck check_compatible(const Mat& omega, const Mat& J, double tol) {
  validate_pair(omega, J, tol);
  CompatibilityCheck out;
  Mat G = omega * J;  // bilinear form omega(.,J.)
  double gscale = std::max(G.max_abs(), 1e-300);
  out.sym_defect = (G - G.transposed()).max_abs() / gscale;
  Mat inv_check = J.transposed() * omega * J - omega;
  out.invariance_defect = inv_check.max_abs() / std::max(omega.max_abs(), 1e-300);
  Mat S = sym_part(G);
  out.min_eig_sym = min_eigenvalue_sym(S);
  out.taming = out.min_eig_sym > 0.0;
  out.compatible = out.taming && out.sym_defect <= tol && out.invariance_defect <= tol;
  if (out.compatible) out.g = S;
  return out;
}

bool check_taming(const Mat& omega, const Mat& J, double tol) {
  validate_pair(omega, J, tol);
  return min_eigenvalue_sym(sym_part(omega * J)) > 0.0;
}

Mat polar_factor(const Mat& J0, const Mat& J, const Mat& omega) {
  auto c0 = check_compatible(omega, J0);
  auto c1 = check_compatible(omega, J);
  if (!c0.compatible || !c1.compatible)
    throw NotCompatible("polar_factor requires both structures omega-compatible");
  Mat S = (J0 * J) * (-1.0);
  // g0-positivity; identities SJ0S = J0 and J = J0 S hold by construction.
  Mat g0S = c0.g * S;
  if (min_eigenvalue_sym(sym_part(g0S)) <= 0.0)
    throw NotCompatible("polar factor not positive w.r.t. g0");
  return S;
}

Mat matrix_sqrt_spd(const Mat& s) {
  SymEig e = sym_eigen(sym_part(s));
  if (e.w.front() <= 0.0) throw NotSPD("sqrt of non-SPD matrix");
  const int n = s.rows();
  Mat d(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = std::sqrt(e.w[i]);
  return e.v * d * e.v.transposed();
}

Mat matrix_log_spd(const Mat& s) {
  if (!s.is_square()) throw DimensionMismatch("matrix_log_spd");
  if ((s - s.transposed()).max_abs() > 1e-8 * std::max(s.max_abs(), 1e-300))
    throw NotSPD("input not symmetric");
  SymEig e = sym_eigen(sym_part(s));
  if (e.w.front() <= 0.0) throw NotSPD("nonpositive eigenvalue in matrix_log_spd");
  const int n = s.rows();
  Mat d(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = std::log(e.w[i]);
  return e.v * d * e.v.transposed();
}

Mat matrix_exp_sym(const Mat& h, double t) {
  if (!h.is_square()) throw DimensionMismatch("matrix_exp_sym");
  SymEig e = sym_eigen(sym_part(h));
  const int n = h.rows();
  Mat d(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = std::exp(t * e.w[i]);
  return e.v * d * e.v.transposed();
}

CompatibleTriple deform_triple(const CompatibleTriple& triple0, const Mat& J_target, double t) {
  if (t < 0.0 || t > 1.0) throw ParameterOutOfRange("deformation parameter t must be in [0,1]");
  auto c0 = check_compatible(triple0.omega, triple0.J);
  if (!c0.compatible) throw NotCompatible("base triple");
  Mat S = polar_factor(triple0.J, J_target, triple0.omega);

  // S^t through the g0-weighted symmetric eigenproblem: W S W^{-1} is
  // plainly symmetric for W = g0^{1/2}.
  Mat W = matrix_sqrt_spd(triple0.g);
  Mat Winv = inverse(W);
  Mat Ssym = W * S * Winv;
  SymEig e = sym_eigen(sym_part(Ssym));
  if (e.w.front() <= 0.0) throw NotSPD("polar factor lost positivity");
  const int n = S.rows();
  Mat d(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = std::pow(e.w[i], t);
  Mat St = Winv * (e.v * d * e.v.transposed()) * W;

  CompatibleTriple out;
  out.omega = triple0.omega;
  out.J = triple0.J * St;
  out.g = triple0.g * St;  // g(t)(X,Y) = g0(X, S^t Y)
  return out;
}

double quasi_isometry_constant_mat(const Mat& g_a, const Mat& g_b) {
  Mat W = matrix_sqrt_spd(g_a);  // throws if not SPD
  Mat Winv = inverse(W);
  Mat M = Winv * sym_part(g_b) * Winv;  // pencil (g_b, g_a) reduced to symmetric form
  SymEig e = sym_eigen(sym_part(M));
  if (e.w.front() <= 0.0) throw NotPositiveDefinite("second metric in quasi_isometry");
  return std::max(e.w.back(), 1.0 / e.w.front());
}

Mat random_symplectic(int n, Rng& rng, double scale) {
  // exp(A) with omega*A symmetric lies in Sp(2n).
  const int d = 2 * n;
  Mat sym(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) sym(i, j) = sym(j, i) = scale * rng.uniform(-1.0, 1.0);
  Mat A = inverse(std_omega(n)) * sym;
  // scaling-and-squaring with a plain series; A is small by construction
  int squarings = 4;
  Mat B = A * std::pow(0.5, squarings);
  Mat term = Mat::identity(d);
  Mat expB = Mat::identity(d);
  for (int k = 1; k <= 14; ++k) {
    term = term * B * (1.0 / k);
    expB = expB + term;
  }
  for (int s = 0; s < squarings; ++s) expB = expB * expB;
  return expB;
}

Mat random_compatible_J(int n, Rng& rng, double scale) {
  Mat psi = random_symplectic(n, rng, scale);
  return inverse(psi) * std_J(n) * psi;
}

Mat random_anti_invariant_symmetric(const Mat& J0, Rng& rng, double scale) {
  const int d = J0.rows();
  Mat raw(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) raw(i, j) = raw(j, i) = scale * rng.uniform(-1.0, 1.0);
  // project onto the J0-anti-invariant part: (h - J0^T h J0)/2
  Mat h = (raw - J0.transposed() * raw * J0) * 0.5;
  return h;
}

}  // namespace cy
