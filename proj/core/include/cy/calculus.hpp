#pragma once

#include <vector>

#include "cy/fft.hpp"
#include "cy/fields.hpp"
#include "cy/parallel.hpp"

namespace cy {

/// Discretization of derivatives. Spectral is the default (exact d.d = 0 and
/// Stokes); stencil4 is 4th-order centered differences behind the same API.
enum class Scheme { spectral, stencil4 };

/// Complex-valued grid field as a pair of real arrays.
struct CField {
  std::vector<double> re, im;
};

/// Per-grid derivative engine. Holds the FFT plan and frequency tables;
/// const after construction and safe to share across threads.
class DiffEngine {
 public:
  explicit DiffEngine(const TorusGrid& g, Scheme s = Scheme::spectral);

  const TorusGrid& grid() const { return grid_; }
  Scheme scheme() const { return scheme_; }
  const GridFft& fft() const { return fft_; }

  std::vector<double> deriv(const std::vector<double>& v, int axis) const;
  std::vector<std::vector<double>> gradient(const std::vector<double>& v) const;
  /// composition of first derivatives along `axes` (order irrelevant)
  std::vector<double> multi_deriv(const std::vector<double>& v, const std::vector<int>& axes) const;
  /// flat coordinate Laplacian, sum of repeated first derivatives
  std::vector<double> laplacian(const std::vector<double>& v) const;
  /// spectral Poisson inverse on the mean-zero subspace (zero mode dropped)
  std::vector<double> inv_laplacian_mean_zero(const std::vector<double>& v) const;

  // spectral-space API (used by hot paths; spectra are plain full-complex)
  std::vector<cplx> spectrum(const std::vector<double>& v) const;
  std::vector<double> from_spectrum(std::vector<cplx> spec) const;
  std::vector<double> deriv_from_spectrum(const std::vector<cplx>& spec,
                                          const std::vector<int>& axes) const;
  void accumulate_deriv_spectrum(const std::vector<cplx>& spec, int axis, double sign,
                                 std::vector<cplx>& acc) const;
  /// spectral assembly of (d J d phi)_{ab} for a constant J
  void accumulate_dJd_spectrum(const std::vector<cplx>& spec, const double* J, int a, int b,
                               std::vector<cplx>& acc) const;

  /// mixed complex derivative d^{..}/ (prod dz_hol)(prod dz~_anti) of a real field;
  /// hol/anti hold complex-axis indices in [0, n)
  CField complex_deriv(const std::vector<double>& field, const std::vector<int>& hol,
                       const std::vector<int>& anti) const;

  std::vector<double> stencil_deriv(const std::vector<double>& v, int axis) const;

 private:
  TorusGrid grid_;
  Scheme scheme_;
  GridFft fft_;
  std::vector<double> freq_;  // integer frequency per spectral index, Nyquist zeroed
};

FormField d(const ScalarField& f, const DiffEngine& eng);
FormField d(const FormField& alpha, const DiffEngine& eng);

/// (J alpha)(X) = -alpha(JX) pointwise; the d^c convention used throughout.
FormField apply_J_to_form(const FormField& one_form, const ACSField& J);
FormField dJd(const ScalarField& phi, const ACSField& J, const DiffEngine& eng);

struct TypeSplit {
  FormField p11;     // J-invariant part
  FormField p20_02;  // J-anti-invariant part
};
TypeSplit project_types(const FormField& beta, const ACSField& J);

FormField wedge(const FormField& a, const FormField& b);
/// integral of a top-degree form over the unit torus
double integrate(const FormField& top);
/// integral of a scalar against omega^n/n! (the unit-mass volume form)
double integral_against_volume(const ScalarField& f);

/// k-th compound (minor) matrix of m over the sorted-tuple basis
Mat compound_matrix(const Mat& m, int k);
FormField hodge_star(const FormField& beta, const Mat& g);
double form_pointwise_norm_sq(const FormField& a, std::size_t p, const Mat& g);

/// N^k_{ij} = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y] on coordinate fields,
/// stored per sorted pair (i<j) and output index k.
struct NijenhuisField {
  TorusGrid grid;
  std::vector<std::vector<double>> comp;  // comp[pair*dim + k][point]
  double at(std::size_t p, int i, int j, int k) const;
};
NijenhuisField nijenhuis(const ACSField& J, const DiffEngine& eng);

/// Max over grid points and index triples of the cyclic sum of the
/// (0,2)-torsion components in a pointwise unitary frame; vanishes for
/// closed omega at scheme accuracy.
double nijenhuis_cyclic_defect(const NijenhuisField& N, const ACSField& J,
                               const FormField& omega);

/// Decomposition omega + dJd(phi) = tau + H + conj(tau). `tau` stores the
/// real anti-invariant part tau + conj(tau), computed by the zeroth-order
/// Nijenhuis contraction -1/2 dphi(J N(.,.)); H is the complement, so the
/// reassembly is exact and project_types serves as the independent oracle.
struct TauH {
  FormField tau;
  FormField H;
};
TauH tau_H(const ScalarField& phi, const ACSField& J, const FormField& omega,
           const DiffEngine& eng);

/// Hermitian matrix of dJ0 d phi for the flat standard structure:
/// h_pq = 4 d^2 phi / dz_p dz~_q.
HermitianField hermitian_hessian(const ScalarField& phi, const DiffEngine& eng);

}  // namespace cy
