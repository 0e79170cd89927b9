#include "cy/fft.hpp"

#include <cmath>

namespace cy {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Fft1D::Fft1D(int len) : len_(len) {
  if (len < 2 || (len & (len - 1)) != 0) throw ParameterOutOfRange("FFT length must be a power of two");
  log2len_ = 0;
  while ((1 << log2len_) < len) ++log2len_;
  bitrev_.resize(len);
  for (int i = 0; i < len; ++i) {
    int r = 0;
    for (int b = 0; b < log2len_; ++b)
      if (i & (1 << b)) r |= 1 << (log2len_ - 1 - b);
    bitrev_[i] = r;
  }
  // stage s (s = 1..log2len): half-size hs = 2^{s-1}, twiddles w^j, j < hs
  tw_fwd_.reserve(len - 1);
  tw_inv_.reserve(len - 1);
  for (int s = 1; s <= log2len_; ++s) {
    int hs = 1 << (s - 1);
    for (int j = 0; j < hs; ++j) {
      double ang = -kTwoPi * j / (2.0 * hs);
      tw_fwd_.push_back(cplx(std::cos(ang), std::sin(ang)));
      tw_inv_.push_back(cplx(std::cos(ang), -std::sin(ang)));
    }
  }
}

void Fft1D::transform(cplx* x, bool inv) const {
  for (int i = 0; i < len_; ++i) {
    int r = bitrev_[i];
    if (r > i) std::swap(x[i], x[r]);
  }
  const cplx* tw = inv ? tw_inv_.data() : tw_fwd_.data();
  int twoff = 0;
  for (int s = 1; s <= log2len_; ++s) {
    int msize = 1 << s;
    int hs = msize >> 1;
    for (int k = 0; k < len_; k += msize) {
      for (int j = 0; j < hs; ++j) {
        cplx w = tw[twoff + j];
        cplx t = w * x[k + j + hs];
        cplx u = x[k + j];
        x[k + j] = u + t;
        x[k + j + hs] = u - t;
      }
    }
    twoff += hs;
  }
  if (inv) {
    double norm = 1.0 / len_;
    for (int i = 0; i < len_; ++i) x[i] *= norm;
  }
}

void Fft1D::inverse(cplx* x) const { transform(x, true); }

GridFft::GridFft(const TorusGrid& g) : grid_(g), fft_(g.m) {}

void GridFft::axis_pass(cplx* data, int axis, bool fwd) const {
  const int m = grid_.m;
  const std::size_t stride = grid_.stride(axis);
  const std::size_t inner = stride;
  std::size_t outer = grid_.points() / (static_cast<std::size_t>(m) * inner);
  std::vector<cplx> line(m);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      cplx* base = data + o * m * inner + i;
      if (inner == 1) {
        if (fwd)
          fft_.forward(base);
        else
          fft_.inverse(base);
        continue;
      }
      for (int t = 0; t < m; ++t) line[t] = base[t * inner];
      if (fwd)
        fft_.forward(line.data());
      else
        fft_.inverse(line.data());
      for (int t = 0; t < m; ++t) base[t * inner] = line[t];
    }
  }
}

std::vector<cplx> GridFft::forward(const std::vector<double>& field) const {
  std::vector<cplx> spec(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) spec[i] = field[i];
  for (int a = 0; a < grid_.dim(); ++a) axis_pass(spec.data(), a, true);
  return spec;
}

std::vector<double> GridFft::inverse_real(std::vector<cplx> spec) const {
  for (int a = 0; a < grid_.dim(); ++a) axis_pass(spec.data(), a, false);
  std::vector<double> out(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) out[i] = spec[i].real();
  return out;
}

std::vector<cplx> GridFft::inverse(std::vector<cplx> spec) const {
  for (int a = 0; a < grid_.dim(); ++a) axis_pass(spec.data(), a, false);
  return spec;
}

}  // namespace cy
