#pragma once

#include "grid.hpp"

namespace bmtk {

/// Forward transform, normalized so coefficients are the trigonometric
/// interpolant's: f(x) = sum_k c_k exp(i (2pi/L) k.x).
SpectralField to_spectral(const RealField& f);
RealField to_physical(const SpectralField& F);

/// Unnormalized complex transforms used internally (padding, oracles).
void fft_forward(const Grid& g, ComplexVec& inout);
void fft_backward(const Grid& g, ComplexVec& inout);

}  // namespace bmtk
