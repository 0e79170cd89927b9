#pragma once

#include <vector>

#include "cy/grid.hpp"
#include "cy/hermitian.hpp"
#include "cy/point_algebra.hpp"

namespace cy {

struct ScalarField {
  TorusGrid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const TorusGrid& g) : grid(g), v(g.points(), 0.0) {}
  ScalarField(const TorusGrid& g, std::vector<double> values) : grid(g), v(std::move(values)) {}

  double mean() const;
  double sup_norm() const;
  /// L^p norm against the unit-mass volume form omega^n/n!
  double lp_norm(double p) const;
  void subtract_mean();
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, double s);

/// Sorted k-subsets of {0..dim-1} in lexicographic order (cached).
const std::vector<std::vector<int>>& form_basis(int dim, int k);
int form_basis_index(int dim, int k, const std::vector<int>& sorted_tuple);

/// Real k-form field; one value array per basis k-covector (antisymmetry is
/// a storage convention, only sorted tuples are kept).
struct FormField {
  TorusGrid grid;
  int degree = 0;
  std::vector<std::vector<double>> comp;

  FormField() = default;
  FormField(const TorusGrid& g, int k)
      : grid(g), degree(k), comp(form_basis(g.dim(), k).size(),
                                 std::vector<double>(g.points(), 0.0)) {}

  int ncomp() const { return static_cast<int>(comp.size()); }
  double sup_norm() const;

  /// 2-form only: antisymmetric matrix at a point (row-major dim x dim)
  void matrix_at(std::size_t p, double* out) const;
  void set_from_matrix(std::size_t p, const double* b);
};

FormField operator+(const FormField& a, const FormField& b);
FormField operator-(const FormField& a, const FormField& b);
FormField operator*(const FormField& a, double s);

/// The standard symplectic form as a 2-form field (constant coefficients).
FormField std_omega_form(const TorusGrid& g);

/// Field of almost complex structures; J is stored once when constant.
struct ACSField {
  TorusGrid grid;
  bool constant = true;
  std::vector<double> J;  // constant: dim^2; varying: points*dim^2, point-major

  ACSField() = default;
  static ACSField standard(const TorusGrid& g);
  static ACSField varying(const TorusGrid& g);

  const double* at(std::size_t p) const {
    return constant ? J.data() : J.data() + p * static_cast<std::size_t>(grid.dim()) * grid.dim();
  }
  double* at_mut(std::size_t p) {
    return constant ? J.data() : J.data() + p * static_cast<std::size_t>(grid.dim()) * grid.dim();
  }
  double entry(std::size_t p, int i, int j) const { return at(p)[i * grid.dim() + j]; }
  /// max over points of |J(p)^2 + I|
  double acs_defect() const;
};

/// Per-point Hermitian n x n matrices, stored as component arrays
/// (n diagonals, then re/im of the strict lower triangle, row-major).
struct HermitianField {
  TorusGrid grid;
  std::vector<std::vector<double>> diag;
  std::vector<std::vector<double>> low_re, low_im;

  HermitianField() = default;
  explicit HermitianField(const TorusGrid& g)
      : grid(g),
        diag(g.n, std::vector<double>(g.points(), 0.0)),
        low_re(static_cast<std::size_t>(g.n) * (g.n - 1) / 2, std::vector<double>(g.points(), 0.0)),
        low_im(static_cast<std::size_t>(g.n) * (g.n - 1) / 2, std::vector<double>(g.points(), 0.0)) {}

  HermMat at(std::size_t p) const;
  void set(std::size_t p, const HermMat& h);
};

/// Hermitian matrix of a J_std-invariant 2-form in interleaved coordinates:
/// beta = (i/2) sum h_{jk} dz_j ^ dz~_k, so h_pq = B[2p][2q+1] - i*B[2p][2q].
/// The standard omega maps to the identity.
HermitianField hermitian_from_two_form(const FormField& beta);
FormField two_form_from_hermitian(const HermitianField& h);

}  // namespace cy
