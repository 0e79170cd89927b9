#pragma once

#include <complex>
#include <vector>

#include "cy/grid.hpp"

namespace cy {

using cplx = std::complex<double>;

/// In-place complex FFT for power-of-two lengths (iterative radix-2 with a
/// precomputed twiddle table). Forward uses e^{-2pi i kt/N}; inverse
/// normalizes by 1/N.
class Fft1D {
 public:
  explicit Fft1D(int len);
  int length() const { return len_; }
  void forward(cplx* x) const { transform(x, false); }
  void inverse(cplx* x) const;

 private:
  void transform(cplx* x, bool inv) const;
  int len_;
  int log2len_;
  std::vector<int> bitrev_;
  std::vector<cplx> tw_fwd_, tw_inv_;  // twiddles per stage, concatenated
};

/// Full-spectrum transforms of real grid fields. Lines along each axis are
/// gathered into a contiguous scratch buffer, transformed, and scattered
/// back; the per-line work is independent, so callers may parallelize.
class GridFft {
 public:
  explicit GridFft(const TorusGrid& g);
  const TorusGrid& grid() const { return grid_; }

  std::vector<cplx> forward(const std::vector<double>& field) const;
  /// destroys the argument; returns the real part (imaginary part is
  /// roundoff for spectra of real fields under real-symmetric multipliers)
  std::vector<double> inverse_real(std::vector<cplx> spec) const;
  std::vector<cplx> inverse(std::vector<cplx> spec) const;

  void axis_pass(cplx* data, int axis, bool fwd) const;

 private:
  TorusGrid grid_;
  Fft1D fft_;
};

}  // namespace cy
