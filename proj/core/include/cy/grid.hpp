#pragma once

#include <cstddef>

#include "cy/errors.hpp"

namespace cy {

/// Uniform periodic grid on the unit torus R^{2n}/Z^{2n}, interleaved
/// coordinates (x1,y1,...,xn,yn). Axis 0 is the slowest index (row-major).
struct TorusGrid {
  int n = 0;  // complex dimension
  int m = 0;  // points per real axis, power of two >= 8

  TorusGrid() = default;
  TorusGrid(int n_, int m_) : n(n_), m(m_) {
    if (n < 1 || n > 2) throw ParameterOutOfRange("complex dimension must be 1 or 2");
    if (m < 8 || (m & (m - 1)) != 0)
      throw ParameterOutOfRange("points per axis must be a power of two >= 8");
  }

  int dim() const { return 2 * n; }
  double spacing() const { return 1.0 / m; }
  std::size_t points() const {
    std::size_t p = 1;
    for (int i = 0; i < dim(); ++i) p *= static_cast<std::size_t>(m);
    return p;
  }
  std::size_t stride(int axis) const {
    std::size_t s = 1;
    for (int i = axis + 1; i < dim(); ++i) s *= static_cast<std::size_t>(m);
    return s;
  }
  int wrap(int idx) const {
    idx %= m;
    return idx < 0 ? idx + m : idx;
  }
  /// integer frequency of spectral index t along one axis
  int freq(int t) const { return t <= m / 2 ? t : t - m; }

  bool operator==(const TorusGrid& o) const { return n == o.n && m == o.m; }
};

}  // namespace cy
