#pragma once

#include <limits>

#include "grid.hpp"

namespace bmtk {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// (p, q) with 1 <= q <= p <= inf.
struct MorreyParams {
    double p = 2.0;
    double q = 2.0;

    void validate() const;
};

/// Dyadic window family: periodic axis-aligned cubes of half-width L*2^{-k},
/// k = 1..k_max, centered on every stride-th lattice point.
struct WindowSet {
    int k_max = 0;   // 0 means "log2(size)" resolved per grid
    int stride = 1;

    int resolved_kmax(const Grid& g) const;
    void validate(const Grid& g) const;
};

/// sup over windows of r^{n/p-n/q} (h^n sum |f|^q)^{1/q}; the sup-norm when
/// q = inf.  Evaluated with summed-area tables; brute force must agree to
/// roundoff.
double morrey_norm(const RealField& f, const MorreyParams& mp, const WindowSet& ws);

/// Morrey norm of the pointwise magnitude.
double morrey_norm(const VectorField& v, const MorreyParams& mp, const WindowSet& ws);

}  // namespace bmtk
