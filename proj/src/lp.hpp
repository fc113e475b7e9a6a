#pragma once

#include "fft.hpp"
#include "grid.hpp"

namespace bmtk {

/// Inclusive range of block indices that can be nonzero on this grid.
/// Homogeneous blocks outside it vanish because the annulus misses the
/// frequency lattice entirely.
struct BlockRange {
    int j_min;
    int j_max;
};
BlockRange block_range(const Grid& g, bool homogeneous);

/// Frequency radii |xi| = (2pi/L)|k| at every lattice point, cached per grid.
const std::vector<double>& lattice_radii(const Grid& g);

RealField dyadic_block(const RealField& f, int j, bool homogeneous);
SpectralField dyadic_block(const SpectralField& F, int j, bool homogeneous);
VectorField dyadic_block(const VectorField& v, int j, bool homogeneous);

/// Multiplier chi(2^{-j}|xi|): passes |xi| <= 2^j, kills |xi| >= 2^{j+1}.
RealField low_pass(const RealField& f, int j);
SpectralField low_pass(const SpectralField& F, int j);
VectorField low_pass(const VectorField& v, int j);

struct DyadicDecomposition {
    int j_min = 0;
    int j_max = -1;
    bool homogeneous = true;
    double mean = 0.0;  // zero-mode value, kept aside in the homogeneous case
    std::vector<RealField> blocks;
    Grid grid;

    const RealField& block(int j) const { return blocks.at(static_cast<std::size_t>(j - j_min)); }
};

DyadicDecomposition decompose(const RealField& f, bool homogeneous);
RealField reconstruct(const DyadicDecomposition& d);

}  // namespace bmtk
