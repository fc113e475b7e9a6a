#pragma once

#include "fft.hpp"
#include "grid.hpp"

namespace bmtk {

/// d^order/dx_axis^order by frequency multiplication.  Odd orders zero the
/// Nyquist mode on that axis so real fields stay real.
RealField spectral_derivative(const RealField& f, int axis, int order);
SpectralField spectral_derivative(const SpectralField& F, int axis, int order);

SpectralField spectral_divergence(const std::vector<SpectralField>& V);
RealField divergence(const VectorField& v);
VectorField gradient(const RealField& f);

/// 2D: scalar curl d1 v2 - d2 v1.  3D: use curl3.
RealField curl2(const VectorField& v);
VectorField curl3(const VectorField& v);

/// Scale-invariant divergence defect: max_k |xi.v(k)| / max_k |xi||v(k)|.
double divergence_defect(const VectorField& v);
void require_divergence_free(const VectorField& v, const char* where, double tol = 1e-10);

VectorField leray_project(const VectorField& v);
/// In-place spectral form: V <- V - xi (xi.V)/|xi|^2, zero mode untouched.
void project_divergence_free(std::vector<SpectralField>& V);

/// grad P with P = (-Lap)^{-1} div((w.grad)v)  [ - (-Lap)^{-1} div((a.grad)b) ],
/// zero frequency of P fixed to 0.  Advective products are 2/3-dealiased.
VectorField pressure_gradient(const VectorField& w, const VectorField& v,
                              const VectorField* a = nullptr, const VectorField* b = nullptr);

/// Zeroes modes with any |k_i| > floor(size/3).
RealField dealias(const RealField& f);
void dealias_in_place(SpectralField& F);
VectorField dealias(const VectorField& v);

/// Pointwise product followed by the 2/3 dealias truncation.
RealField multiply_dealias(const RealField& f, const RealField& g);
/// (w.grad)v with dealiased products.
VectorField advect(const VectorField& w, const VectorField& v);

/// Exact (zero-padded) product: the true product spectrum, truncated to the
/// grid's representable modes.  Bilinear, alias-free.
RealField multiply_exact(const RealField& f, const RealField& g);

RealField zero_mode_removed(const RealField& f);
double mean_value(const RealField& f);

}  // namespace bmtk
