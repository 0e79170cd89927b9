#pragma once

#include <complex>
#include <vector>

#include "cy/errors.hpp"

namespace cy {

using cplx = std::complex<double>;

/// Hermitian n x n matrix; stores the real diagonal and the strict lower
/// triangle, so A = A^dagger holds exactly by construction.
class HermMat {
 public:
  HermMat() = default;
  explicit HermMat(int n)
      : n_(n), diag_(n, 0.0), lower_(static_cast<size_t>(n) * (n - 1) / 2, cplx(0, 0)) {}
  static HermMat identity(int n);

  int dim() const { return n_; }
  double diag(int i) const { return diag_[i]; }
  double& diag(int i) { return diag_[i]; }
  /// entry (i,j) with i > j
  cplx& lower(int i, int j) { return lower_[idx(i, j)]; }
  cplx lower(int i, int j) const { return lower_[idx(i, j)]; }
  /// general accessor, reconstructs the upper triangle by conjugation
  cplx at(int i, int j) const;

  HermMat operator+(const HermMat& o) const;
  HermMat operator-(const HermMat& o) const;
  HermMat scaled(double s) const;

  double trace() const;
  /// determinant (real for Hermitian); closed form for n <= 3, else via
  /// Cholesky of a shifted copy -- only used at desk scale.
  double det() const;
  double max_abs() const;

 private:
  size_t idx(int i, int j) const { return static_cast<size_t>(i) * (i - 1) / 2 + j; }
  int n_ = 0;
  std::vector<double> diag_;
  std::vector<cplx> lower_;  // row-major strict lower triangle
};

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
struct HermEig {
  std::vector<double> w;   // ascending
  std::vector<cplx> v;     // column-major n x n unitary, v[col*n + row]
};
HermEig herm_eigen(const HermMat& a);

/// Cholesky a = L L^dagger; throws NotPositiveDefinite.
/// Returns column-major lower triangular L (full n x n storage).
std::vector<cplx> cholesky(const HermMat& a);

struct Diagonalization {
  std::vector<double> a;   // generalized eigenvalues, ascending, all > 0
  std::vector<cplx> basis; // column-major B: B^dag h0 B = I, B^dag ha B = diag(a)
  int n = 0;
};

/// Simultaneous diagonalization of a positive definite Hermitian pair:
/// Cholesky of h0, then a Hermitian eigensolve (matches the pointwise
/// normal-form construction used for the a_j identities).
Diagonalization simultaneous_diagonalize(const HermMat& h0, const HermMat& ha);

struct NormIdentities {
  double da_norm_sq;    // 2 sum (a_j - 1)^2
  double h_norm_sq;     // 2 sum a_j^2
  double hinv_norm_sq;  // 2 sum a_j^{-2}
};
NormIdentities pointwise_norm_identities(const Diagonalization& d);

}  // namespace cy
