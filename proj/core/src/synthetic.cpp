#include "cy/synthetic.hpp"

#include <cmath>

#include "cy/point_algebra.hpp"

namespace cy {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

ACSField synthetic_compatible_J(const TorusGrid& g, std::uint64_t seed, double scale, int kmax) {
  const int d = g.dim();
  Rng rng(seed);
  Mat J0 = std_J(g.n);

  // basis of symmetric J0-anti-invariant matrices with per-mode coefficients
  struct Term {
    Mat h;
    std::vector<int> k;
    double phase;
  };
  std::vector<Term> terms;
  int nterms = 2 * g.n;
  for (int t = 0; t < nterms; ++t) {
    Term tm;
    tm.h = random_anti_invariant_symmetric(J0, rng, scale);
    tm.k.resize(d);
    bool nonzero = false;
    for (int a = 0; a < d; ++a) {
      tm.k[a] = rng.uniform_int(-kmax, kmax);
      if (tm.k[a] != 0) nonzero = true;
    }
    if (!nonzero) tm.k[0] = 1;
    tm.phase = rng.uniform(0.0, 1.0);
    terms.push_back(tm);
  }

  ACSField out = ACSField::varying(g);
  if (scale == 0.0) {
    ACSField std = ACSField::standard(g);
    for (std::size_t p = 0; p < g.points(); ++p)
      for (int i = 0; i < d * d; ++i) out.at_mut(p)[i] = std.J[i];
    return out;
  }

  std::vector<int> idx(d, 0);
  for (std::size_t p = 0; p < g.points(); ++p) {
    Mat h(d, d);
    for (const auto& tm : terms) {
      double phase = tm.phase;
      for (int a = 0; a < d; ++a) phase += tm.k[a] * (static_cast<double>(idx[a]) / g.m);
      h = h + tm.h * std::cos(kTwoPi * phase);
    }
    Mat J = J0 * matrix_exp_sym(h, 1.0);
    double* dst = out.at_mut(p);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) dst[i * d + j] = J(i, j);
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < g.m) break;
      idx[a] = 0;
    }
  }
  return out;
}

ScalarField random_band_limited(const TorusGrid& g, Rng& rng, int terms, int kmax, double amp) {
  const int d = g.dim();
  struct H {
    double a, phase;
    std::vector<int> k;
  };
  std::vector<H> hs;
  for (int t = 0; t < terms; ++t) {
    H h;
    h.a = amp * rng.uniform(0.3, 1.0);
    h.phase = rng.uniform(0.0, 1.0);
    h.k.resize(d);
    bool nonzero = false;
    for (int a = 0; a < d; ++a) {
      h.k[a] = rng.uniform_int(-kmax, kmax);
      if (h.k[a] != 0) nonzero = true;
    }
    if (!nonzero) h.k[0] = 1;
    hs.push_back(h);
  }
  ScalarField out(g);
  std::vector<int> idx(d, 0);
  for (std::size_t p = 0; p < g.points(); ++p) {
    double s = 0.0;
    for (const auto& h : hs) {
      double phase = h.phase;
      for (int a = 0; a < d; ++a) phase += h.k[a] * (static_cast<double>(idx[a]) / g.m);
      s += h.a * std::cos(kTwoPi * phase);
    }
    out.v[p] = s;
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < g.m) break;
      idx[a] = 0;
    }
  }
  out.subtract_mean();
  return out;
}

ScalarField manufactured_potential(const TorusGrid& g, double amplitude) {
  // default amplitude keeps the n=2 taming margin near 0.4

  const int d = g.dim();
  ScalarField out(g);
  std::vector<int> idx(d, 0);
  for (std::size_t p = 0; p < g.points(); ++p) {
    double x1 = static_cast<double>(idx[0]) / g.m;
    double y1 = static_cast<double>(idx[1]) / g.m;
    double x2 = d > 2 ? static_cast<double>(idx[2]) / g.m : 0.0;
    double y2 = d > 3 ? static_cast<double>(idx[3]) / g.m : 0.0;
    double s = std::sin(kTwoPi * x1) * std::cos(kTwoPi * y1) +
               0.8 * std::cos(kTwoPi * (x1 + y2)) + 0.7 * std::sin(kTwoPi * (x2 - y1)) +
               0.6 * std::cos(kTwoPi * x2) * std::cos(kTwoPi * y2);
    out.v[p] = amplitude * s;
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < g.m) break;
      idx[a] = 0;
    }
  }
  out.subtract_mean();
  return out;
}

}  // namespace cy
