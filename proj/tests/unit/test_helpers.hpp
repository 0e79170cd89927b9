#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "cy/calculus.hpp"
#include "cy/fields.hpp"
#include "cy/rng.hpp"

namespace cytest {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Samples an analytic function of the 2n coordinates on the grid nodes.
inline cy::ScalarField sample(const cy::TorusGrid& g,
                              const std::function<double(const std::vector<double>&)>& f) {
  cy::ScalarField out(g);
  const int d = g.dim();
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  for (std::size_t p = 0; p < g.points(); ++p) {
    for (int a = 0; a < d; ++a) x[a] = static_cast<double>(idx[a]) / g.m;
    out.v[p] = f(x);
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < g.m) break;
      idx[a] = 0;
    }
  }
  return out;
}

struct Harmonic {
  double amp;
  std::vector<int> k;  // integer frequency per axis
  bool use_sin;
};

/// Random band-limited trigonometric polynomial, |k|_inf <= kmax.
inline std::vector<Harmonic> random_harmonics(const cy::TorusGrid& g, cy::Rng& rng, int terms,
                                              int kmax, double amp) {
  std::vector<Harmonic> hs;
  for (int t = 0; t < terms; ++t) {
    Harmonic h;
    h.amp = amp * rng.uniform(0.3, 1.0);
    h.k.resize(g.dim());
    bool nonzero = false;
    for (int a = 0; a < g.dim(); ++a) {
      h.k[a] = rng.uniform_int(-kmax, kmax);
      if (h.k[a] != 0) nonzero = true;
    }
    if (!nonzero) h.k[0] = 1;
    h.use_sin = rng.uniform() < 0.5;
    hs.push_back(h);
  }
  return hs;
}

inline double eval_harmonics(const std::vector<Harmonic>& hs, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& h : hs) {
    double phase = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) phase += h.k[a] * x[a];
    s += h.amp * (h.use_sin ? std::sin(kTwoPi * phase) : std::cos(kTwoPi * phase));
  }
  return s;
}

inline cy::ScalarField sample_harmonics(const cy::TorusGrid& g, const std::vector<Harmonic>& hs) {
  return sample(g, [&](const std::vector<double>& x) { return eval_harmonics(hs, x); });
}

}  // namespace cytest
