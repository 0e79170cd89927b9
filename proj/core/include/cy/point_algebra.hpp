#pragma once

#include <vector>

#include "cy/errors.hpp"
#include "cy/rng.hpp"

namespace cy {

// Relative tolerance for algebraic identity checks on well-conditioned
// small matrices (double precision).
inline constexpr double kAlgTol = 1e-10;

/// Small dense real matrix, row-major. Desk scale: dim <= 16.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}
  static Mat identity(int n);
  static Mat zero(int n) { return Mat(n, n); }

  int rows() const { return r_; }
  int cols() const { return c_; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(const Mat& o) const;
  Mat operator*(double s) const;
  Mat transposed() const;

  double max_abs() const;
  double frobenius() const;
  bool is_square() const { return r_ == c_; }

 private:
  int r_ = 0, c_ = 0;
  std::vector<double> a_;
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
/// A = V diag(w) V^T with V orthogonal; `a` must be symmetric.
struct SymEig {
  std::vector<double> w;  // ascending
  Mat v;                  // columns are eigenvectors
};
SymEig sym_eigen(const Mat& a);

double min_eigenvalue_sym(const Mat& a);

Mat inverse(const Mat& a);

// Standard structures on R^{2n}, interleaved coordinates (x1,y1,...,xn,yn):
// omega = sum dx_j ^ dy_j as the bilinear form X^T W Y, J_std x->y, y->-x.
Mat std_omega(int n);
Mat std_J(int n);

struct CompatibleTriple {
  Mat omega;  // antisymmetric, nondegenerate
  Mat J;      // J^2 = -I
  Mat g;      // g = omega(., J.)
};

struct CompatibilityCheck {
  bool compatible = false;
  bool taming = false;
  double sym_defect = 0.0;      // ||G - G^T|| / ||G||, G = omega*J
  double invariance_defect = 0.0;  // ||J^T omega J - omega|| / ||omega||
  double min_eig_sym = 0.0;     // smallest eigenvalue of sym(G)
  Mat g;                        // returned metric when compatible
};

/// Validates omega antisymmetric nondegenerate and J^2 = -I (throws
/// otherwise), then decides taming / compatibility of the pair.
CompatibilityCheck check_compatible(const Mat& omega, const Mat& J, double tol = kAlgTol);

/// True iff the symmetric part of omega(.,J.) is positive definite.
bool check_taming(const Mat& omega, const Mat& J, double tol = kAlgTol);

/// S = -J0*J for an omega-compatible pair. Self-adjoint positive w.r.t.
/// g0 = omega(.,J0.), symplectic, and S*J0*S = J0, J = J0*S. Plain matrix
/// symmetry holds when (omega,J0) is the standard pair.
Mat polar_factor(const Mat& J0, const Mat& J, const Mat& omega);

/// Principal logarithm of a symmetric positive definite matrix.
Mat matrix_log_spd(const Mat& s);

/// exp(t*H) for symmetric H.
Mat matrix_exp_sym(const Mat& h, double t = 1.0);

Mat matrix_sqrt_spd(const Mat& s);

/// Geodesic deformation of the metric towards the one induced by J_target:
/// g(t) = g0(., S^t .) with S the polar factor, J(t) = J0 * S^t.
/// t = 0 returns triple0, t = 1 lands on (omega, J_target, omega(.,J_target.)).
CompatibleTriple deform_triple(const CompatibleTriple& triple0, const Mat& J_target, double t);

/// Smallest C >= 1 with C^{-1} g_a <= g_b <= C g_a, via generalized
/// eigenvalue extremes of (g_b, g_a). Both inputs must be SPD.
double quasi_isometry_constant_mat(const Mat& g_a, const Mat& g_b);

// Randomized generators for fuzz suites (deterministic through Rng).
Mat random_symplectic(int n, Rng& rng, double scale = 0.4);
Mat random_compatible_J(int n, Rng& rng, double scale = 0.4);
/// Symmetric and J0-anti-invariant: h(J0 X, J0 Y) = -h(X, Y).
Mat random_anti_invariant_symmetric(const Mat& J0, Rng& rng, double scale = 0.4);

}  // namespace cy
