#pragma once

namespace bmtk {

/// Smooth radial cutoff: 1 on [0,1], 0 on [2,inf), and on (1,2) the smooth
/// step B(2-t)/(B(2-t)+B(t-1)) with B(x)=exp(-1/x) for x>0.  Nonincreasing
/// and C^infinity at the matching points.
double cutoff_chi(double t);

/// Band multiplier chi(2^{-j} rho) - chi(2^{1-j} rho); supported on the
/// annulus 2^{j-1} < rho < 2^{j+1}, equal to 1 at rho = 2^j.
double band_filter(double rho, int j);

/// Low-pass multiplier chi(2^{-j} rho).
double lowpass_filter(double rho, int j);

}  // namespace bmtk
