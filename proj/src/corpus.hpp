#pragma once

#include <cstdint>

#include "grid.hpp"

namespace bmtk {

/// Deterministic test-field generators.  Every coefficient is drawn in
/// counter mode from (seed, mode index), so regeneration is bit-identical
/// for any evaluation order.

/// Random band-limited field: per-mode Gaussian coefficients with amplitude
/// |k|^{-sigma - n/2} (block norms then decay like 2^{-sigma j}), Hermitian
/// symmetric, zero mean, modes limited to |k_i| <= size/3.  Normalized to
/// sup-norm 1 before scaling by amplitude.
RealField random_band_limited(const Grid& g, std::uint64_t seed, double sigma = 2.0,
                              double amplitude = 1.0);

/// Divergence-free random field (componentwise draws + projection + renorm).
VectorField random_divergence_free(const Grid& g, std::uint64_t seed, double sigma = 2.0,
                                   double amplitude = 1.0);

/// cos of a single lattice mode along the given wavevector.
RealField single_mode(const Grid& g, const std::array<int, 3>& k, double amplitude = 1.0,
                      double phase = 0.0);

/// 2D steady cellular flow (cos x sin y, -sin x cos y); divergence-free.
VectorField taylor_green(const Grid& g, double amplitude = 1.0);

/// 2D shear (sin x2, 0); divergence-free.
VectorField shear_flow(const Grid& g, double amplitude = 1.0);

/// Product of smooth one-axis bumps (band-limited, strictly positive mean).
RealField bump_product(const Grid& g, std::uint64_t seed);

}  // namespace bmtk
