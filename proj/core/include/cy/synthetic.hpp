#pragma once

#include <cstdint>

#include "cy/calculus.hpp"
#include "cy/fields.hpp"
#include "cy/rng.hpp"

namespace cy {

/// Smooth band-limited omega_std-compatible J field built by the pointwise
/// deformation J(x) = J_std exp(h(x)), h symmetric and J_std-anti-invariant
/// with trigonometric entries of bandwidth <= kmax. scale = 0 gives J_std.
ACSField synthetic_compatible_J(const TorusGrid& g, std::uint64_t seed, double scale,
                                int kmax = 1);

/// Random real band-limited trigonometric polynomial with `terms` modes of
/// bandwidth <= kmax and coefficients ~ amp; mean-zero.
ScalarField random_band_limited(const TorusGrid& g, Rng& rng, int terms, int kmax, double amp);

/// Fixed band-limited potential used by the manufactured n=2 problems;
/// amplitude chosen so the taming margin sits near 0.4.
ScalarField manufactured_potential(const TorusGrid& g, double amplitude = 0.0035);

}  // namespace cy
