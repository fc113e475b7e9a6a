#include "lp.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "cutoff.hpp"

namespace bmtk {

const std::vector<double>& lattice_radii(const Grid& g) {
    struct Key {
        int dim, size;
        double length;
        bool operator<(const Key& o) const {
            if (dim != o.dim) return dim < o.dim;
            if (size != o.size) return size < o.size;
            return length < o.length;
        }
    };
    static std::mutex mutex;
    static std::map<Key, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = cache.try_emplace(Key{g.dim, g.size, g.length});
    if (inserted) {
        auto& radii = it->second;
        radii.resize(g.point_count());
        const double ws = g.wave_scale();
        for_each_mode(g, [&](std::size_t f, const std::array<int, 3>& k) {
            double k2 = 0.0;
            for (int d = 0; d < g.dim; ++d) k2 += static_cast<double>(k[d]) * k[d];
            radii[f] = ws * std::sqrt(k2);
        });
    }
    return it->second;
}

BlockRange block_range(const Grid& g, bool homogeneous) {
    const double rho_min = g.wave_scale();
    const double rho_max = g.wave_scale() * std::sqrt(static_cast<double>(g.dim)) * (g.size / 2);
    // band_filter(rho, j) != 0 needs 2^{j-1} < rho < 2^{j+1}
    int j_lo = static_cast<int>(std::floor(std::log2(rho_min)));
    int j_hi = static_cast<int>(std::floor(std::log2(rho_max))) + 1;
    if (!homogeneous) j_lo = -1;
    return {j_lo, j_hi};
}

SpectralField dyadic_block(const SpectralField& F, int j, bool homogeneous) {
    const Grid& g = F.grid();
    SpectralField out(g);
    if (!homogeneous && j <= -2) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.0;
        return out;
    }
    const auto& radii = lattice_radii(g);
    const bool low_block = !homogeneous && j == -1;
    for (std::size_t i = 0; i < out.size(); ++i) {
        double m = low_block ? cutoff_chi(radii[i]) : band_filter(radii[i], j);
        out[i] = m != 0.0 ? F[i] * m : 0.0;
    }
    if (homogeneous) out[0] = 0.0;  // annulus never reaches the zero mode
    return out;
}

RealField dyadic_block(const RealField& f, int j, bool homogeneous) {
    return to_physical(dyadic_block(to_spectral(f), j, homogeneous));
}

VectorField dyadic_block(const VectorField& v, int j, bool homogeneous) {
    VectorField out(v.grid());
    for (int d = 0; d < v.dim(); ++d) out[d] = dyadic_block(v[d], j, homogeneous);
    return out;
}

SpectralField low_pass(const SpectralField& F, int j) {
    const Grid& g = F.grid();
    const auto& radii = lattice_radii(g);
    SpectralField out(g);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double m = lowpass_filter(radii[i], j);
        out[i] = m != 0.0 ? F[i] * m : 0.0;
    }
    return out;
}

RealField low_pass(const RealField& f, int j) { return to_physical(low_pass(to_spectral(f), j)); }

VectorField low_pass(const VectorField& v, int j) {
    VectorField out(v.grid());
    for (int d = 0; d < v.dim(); ++d) out[d] = low_pass(v[d], j);
    return out;
}

DyadicDecomposition decompose(const RealField& f, bool homogeneous) {
    DyadicDecomposition d;
    d.grid = f.grid();
    d.homogeneous = homogeneous;
    BlockRange r = block_range(f.grid(), homogeneous);
    d.j_min = r.j_min;
    d.j_max = r.j_max;
    SpectralField F = to_spectral(f);
    d.mean = homogeneous ? F[0].real() : 0.0;
    d.blocks.reserve(static_cast<std::size_t>(r.j_max - r.j_min + 1));
    for (int j = r.j_min; j <= r.j_max; ++j) {
        // Inhomogeneous partition telescopes as low block + bands j >= 1; the
        // j = 0 annulus is already inside the low block, so that slot is empty.
        if (!homogeneous && j == 0) {
            d.blocks.emplace_back(f.grid());
            continue;
        }
        d.blocks.push_back(to_physical(dyadic_block(F, j, homogeneous)));
    }
    return d;
}

RealField reconstruct(const DyadicDecomposition& d) {
    RealField out(d.grid, d.homogeneous ? d.mean : 0.0);
    for (const auto& b : d.blocks)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

}  // namespace bmtk
