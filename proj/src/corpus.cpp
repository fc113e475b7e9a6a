#include "corpus.hpp"

#include <cmath>

#include "fft.hpp"
#include "spectral_ops.hpp"

namespace bmtk {

namespace {

/// Two independent standard normals from a (seed, counter) pair.
std::pair<double, double> gauss_pair(std::uint64_t seed, std::uint64_t counter) {
    SplitMix64 gen(split_seed(seed, counter));
    double u1 = gen.u01();
    double u2 = gen.u01();
    double rad = std::sqrt(-2.0 * std::log1p(u1 - 1.0 + 0x1.0p-53));  // u1 in (0,1]
    return {rad * std::cos(kTwoPi * u2), rad * std::sin(kTwoPi * u2)};
}

void normalize_sup(RealField& f, double amplitude) {
    double m = sup_norm(f);
    if (m == 0.0) return;
    double c = amplitude / m;
    for (auto& v : f.samples()) v *= c;
}

}  // namespace

RealField random_band_limited(const Grid& g, std::uint64_t seed, double sigma, double amplitude) {
    SpectralField F(g);
    const int cut = g.size / 3;
    for_each_mode(g, [&](std::size_t f, const std::array<int, 3>& k) {
        double k2 = 0.0;
        bool keep = true;
        for (int d = 0; d < g.dim; ++d) {
            k2 += static_cast<double>(k[d]) * k[d];
            if (std::abs(k[d]) > cut) keep = false;
        }
        if (!keep || k2 == 0.0) {
            F[f] = 0.0;
            return;
        }
        auto [g1, g2] = gauss_pair(seed, f);
        double amp = std::pow(std::sqrt(k2), -sigma - 0.5 * g.dim);
        F[f] = std::complex<double>(g1, g2) * amp;
    });
    // Hermitian pairing: average each mode with the conjugate of its mirror.
    SpectralField H(g);
    Indexer ix(g);
    for_each_mode(g, [&](std::size_t f, const std::array<int, 3>& k) {
        std::array<int, 3> mirrored{0, 0, 0};
        for (int d = 0; d < g.dim; ++d) mirrored[d] = ((-k[d]) % g.size + g.size) % g.size;
        H[f] = 0.5 * (F[f] + std::conj(F[ix.flat(mirrored)]));
    });
    RealField out = to_physical(H);
    normalize_sup(out, amplitude);
    return out;
}

VectorField random_divergence_free(const Grid& g, std::uint64_t seed, double sigma, double amplitude) {
    VectorField v(g);
    for (int d = 0; d < g.dim; ++d)
        v[d] = random_band_limited(g, split_seed(seed, 1000 + static_cast<std::uint64_t>(d)), sigma, 1.0);
    v = leray_project(v);
    double m = sup_norm(v);
    if (m > 0.0) v = (amplitude / m) * v;
    return v;
}

RealField single_mode(const Grid& g, const std::array<int, 3>& k, double amplitude, double phase) {
    RealField f(g);
    const double ws = g.wave_scale();
    for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
        double arg = phase;
        for (int d = 0; d < g.dim; ++d) arg += ws * k[d] * x[d];
        f[i] = amplitude * std::cos(arg);
    });
    return f;
}

VectorField taylor_green(const Grid& g, double amplitude) {
    if (g.dim != 2) fail_invalid("taylor_green driver is 2D");
    VectorField v(g);
    const double ws = g.wave_scale();
    for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
        v[0][i] = amplitude * std::cos(ws * x[0]) * std::sin(ws * x[1]);
        v[1][i] = -amplitude * std::sin(ws * x[0]) * std::cos(ws * x[1]);
    });
    return v;
}

VectorField shear_flow(const Grid& g, double amplitude) {
    if (g.dim != 2) fail_invalid("shear driver is 2D");
    VectorField v(g);
    const double ws = g.wave_scale();
    for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
        v[0][i] = amplitude * std::sin(ws * x[1]);
        v[1][i] = 0.0;
    });
    return v;
}

RealField bump_product(const Grid& g, std::uint64_t seed) {
    RealField f(g, 1.0);
    SplitMix64 gen(seed);
    const double ws = g.wave_scale();
    for (int d = 0; d < g.dim; ++d) {
        double center = gen.u01() * g.length;
        double width = 0.5 + gen.u01();
        for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
            double c = std::cos(ws * (x[d] - center));
            f[i] *= std::exp(width * (c - 1.0));
        });
    }
    return dealias(f);
}

}  // namespace bmtk
