#include "spectral_ops.hpp"

#include <cmath>

namespace bmtk {

namespace {

std::complex<double> unit_power_i(int order) {
    switch (order & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

SpectralField spectral_derivative(const SpectralField& F, int axis, int order) {
    const Grid& g = F.grid();
    if (axis < 0 || axis >= g.dim) fail_invalid("derivative axis out of range");
    if (order < 1) fail_invalid("derivative order must be >= 1");
    SpectralField out(g);
    const double ws = g.wave_scale();
    const std::complex<double> ipow = unit_power_i(order);
    const bool odd = (order % 2) != 0;
    const int nyquist = -g.size / 2;
    for_each_mode(g, [&](std::size_t f, const std::array<int, 3>& k) {
        int kk = k[axis];
        if (odd && kk == nyquist) {
            out[f] = 0.0;
            return;
        }
        out[f] = F[f] * ipow * std::pow(ws * kk, order);
    });
    return out;
}

RealField spectral_derivative(const RealField& f, int axis, int order) {
    return to_physical(spectral_derivative(to_spectral(f), axis, order));
}

SpectralField spectral_divergence(const std::vector<SpectralField>& V) {
    const Grid& g = V.at(0).grid();
    SpectralField out(g);
    const double ws = g.wave_scale();
    for_each_mode(g, [&](std::size_t f, const std::array<int, 3>& k) {
        std::complex<double> s = 0.0;
        for (int d = 0; d < g.dim; ++d) s += std::complex<double>(0.0, ws * k[d]) * V[d][f];
        out[f] = s;
    });
    return out;
}

RealField divergence(const VectorField& v) {
    std::vector<SpectralField> V;
    for (int d = 0; d < v.dim(); ++d) V.push_back(to_spectral(v[d]));
    return to_physical(spectral_divergence(V));
}

VectorField gradient(const RealField& f) {
    SpectralField F = to_spectral(f);
    VectorField out(f.grid());
    for (int d = 0; d < f.grid().dim; ++d) out[d] = to_physical(spectral_derivative(F, d, 1));
    return out;
}

RealField curl2(const VectorField& v) {
    if (v.dim() != 2) fail_invalid("curl2 needs a 2D field");
    SpectralField v0 = to_spectral(v[0]);
    SpectralField v1 = to_spectral(v[1]);
    SpectralField w(v.grid());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.0;
    SpectralField d1v2 = spectral_derivative(v1, 0, 1);
    SpectralField d2v1 = spectral_derivative(v0, 1, 1);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = d1v2[i] - d2v1[i];
    return to_physical(w);
}

VectorField curl3(const VectorField& v) {
    if (v.dim() != 3) fail_invalid("curl3 needs a 3D field");
    std::vector<SpectralField> V;
    for (int d = 0; d < 3; ++d) V.push_back(to_spectral(v[d]));
    VectorField out(v.grid());
    auto d = [&](int comp, int axis) { return spectral_derivative(V[comp], axis, 1); };
    SpectralField c0 = d(2, 1), c0b = d(1, 2);
    SpectralField c1 = d(0, 2), c1b = d(2, 0);
    SpectralField c2 = d(1, 0), c2b = d(0, 1);
    for (std::size_t i = 0; i < c0.size(); ++i) {
        c0[i] -= c0b[i];
        c1[i] -= c1b[i];
        c2[i] -= c2b[i];
    }
    out[0] = to_physical(c0);
    out[1] = to_physical(c1);
    out[2] = to_physical(c2);
    return out;
}

double divergence_defect(const VectorField& v) {
    const Grid& g = v.grid();
    std::vector<SpectralField> V;
    for (int d = 0; d < v.dim(); ++d) V.push_back(to_spectral(v[d]));
    const double ws = g.wave_scale();
    double num = 0.0, den = 0.0;
    for_each_mode(g, [&](std::size_t f, const std::array<int, 3>& k) {
        double k2 = 0.0;
        std::complex<double> dot = 0.0;
        double amp2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            k2 += static_cast<double>(k[d]) * k[d];
            dot += std::complex<double>(0.0, ws * k[d]) * V[d][f];
            amp2 += std::norm(V[d][f]);
        }
        num = std::max(num, std::abs(dot));
        den = std::max(den, ws * std::sqrt(k2) * std::sqrt(amp2));
    });
    if (den == 0.0) return 0.0;
    return num / den;
}

void require_divergence_free(const VectorField& v, const char* where, double tol) {
    double defect = divergence_defect(v);
    if (defect > tol)
        fail_precondition(std::string(where) + ": field is not divergence-free (defect " +
                          std::to_string(defect) + " > tol)");
}

void project_divergence_free(std::vector<SpectralField>& V) {
    const Grid& g = V.at(0).grid();
    for_each_mode(g, [&](std::size_t f, const std::array<int, 3>& k) {
        double k2 = 0.0;
        for (int d = 0; d < g.dim; ++d) k2 += static_cast<double>(k[d]) * k[d];
        if (k2 == 0.0) return;  // zero mode passes through
        std::complex<double> dot = 0.0;
        for (int d = 0; d < g.dim; ++d) dot += static_cast<double>(k[d]) * V[d][f];
        dot /= k2;
        for (int d = 0; d < g.dim; ++d) V[d][f] -= static_cast<double>(k[d]) * dot;
    });
}

VectorField leray_project(const VectorField& v) {
    std::vector<SpectralField> V;
    for (int d = 0; d < v.dim(); ++d) V.push_back(to_spectral(v[d]));
    project_divergence_free(V);
    VectorField out(v.grid());
    for (int d = 0; d < v.dim(); ++d) out[d] = to_physical(V[d]);
    return out;
}

VectorField pressure_gradient(const VectorField& w, const VectorField& v,
                              const VectorField* a, const VectorField* b) {
    const Grid& g = w.grid();
    require_same_grid(g, v.grid(), "pressure_gradient");
    require_divergence_free(w, "pressure_gradient: w");
    if ((a == nullptr) != (b == nullptr)) fail_invalid("pressure_gradient: pair must be both or neither");

    VectorField adv = advect(w, v);
    std::vector<SpectralField> A;
    for (int d = 0; d < g.dim; ++d) A.push_back(to_spectral(adv[d]));
    SpectralField rhs = spectral_divergence(A);
    if (a) {
        require_same_grid(g, a->grid(), "pressure_gradient");
        VectorField madv = advect(*a, *b);
        std::vector<SpectralField> M;
        for (int d = 0; d < g.dim; ++d) M.push_back(to_spectral(madv[d]));
        SpectralField mdiv = spectral_divergence(M);
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= mdiv[i];
    }

    // -Lap P = rhs  =>  P(k) = rhs(k)/|xi|^2, P(0) = 0.
    SpectralField P(g);
    const double ws2 = g.wave_scale() * g.wave_scale();
    for_each_mode(g, [&](std::size_t f, const std::array<int, 3>& k) {
        double k2 = 0.0;
        for (int d = 0; d < g.dim; ++d) k2 += static_cast<double>(k[d]) * k[d];
        P[f] = (k2 == 0.0) ? 0.0 : rhs[f] / (ws2 * k2);
    });

    VectorField out(g);
    for (int d = 0; d < g.dim; ++d) out[d] = to_physical(spectral_derivative(P, d, 1));
    return out;
}

namespace {

bool above_dealias_cut(const std::array<int, 3>& k, int dim, int cut) {
    for (int d = 0; d < dim; ++d)
        if (std::abs(k[d]) > cut) return true;
    return false;
}

}  // namespace

void dealias_in_place(SpectralField& F) {
    const Grid& g = F.grid();
    const int cut = g.size / 3;
    for_each_mode(g, [&](std::size_t f, const std::array<int, 3>& k) {
        if (above_dealias_cut(k, g.dim, cut)) F[f] = 0.0;
    });
}

RealField dealias(const RealField& f) {
    SpectralField F = to_spectral(f);
    dealias_in_place(F);
    return to_physical(F);
}

VectorField dealias(const VectorField& v) {
    VectorField out(v.grid());
    for (int d = 0; d < v.dim(); ++d) out[d] = dealias(v[d]);
    return out;
}

RealField multiply_dealias(const RealField& f, const RealField& g) {
    require_same_grid(f.grid(), g.grid(), "multiply_dealias");
    RealField prod(f.grid());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = f[i] * g[i];
    return dealias(prod);
}

VectorField advect(const VectorField& w, const VectorField& v) {
    const Grid& g = w.grid();
    VectorField out(g);
    std::vector<RealField> dv;
    dv.reserve(static_cast<std::size_t>(g.dim) * g.dim);
    for (int i = 0; i < g.dim; ++i) {
        SpectralField Vi = to_spectral(v[i]);
        for (int d = 0; d < g.dim; ++d) dv.push_back(to_physical(spectral_derivative(Vi, d, 1)));
    }
    for (int i = 0; i < g.dim; ++i) {
        RealField acc(g);
        for (int d = 0; d < g.dim; ++d) {
            const RealField& dvi = dv[static_cast<std::size_t>(i) * g.dim + d];
            for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += w[d][p] * dvi[p];
        }
        out[i] = dealias(acc);
    }
    return out;
}

RealField multiply_exact(const RealField& f, const RealField& g) {
    require_same_grid(f.grid(), g.grid(), "multiply_exact");
    const Grid& gr = f.grid();
    const int n = gr.size;
    const int m = 2 * n;
    Grid pad(gr.dim, m, gr.length);

    auto embed = [&](const RealField& x) {
        SpectralField X = to_spectral(x);
        ComplexVec big(pad.point_count(), std::complex<double>(0.0, 0.0));
        Indexer bi(pad);
        for_each_mode(gr, [&](std::size_t fi, const std::array<int, 3>& k) {
            std::array<int, 3> idx{0, 0, 0};
            for (int d = 0; d < gr.dim; ++d) idx[d] = k[d] >= 0 ? k[d] : k[d] + m;
            big[bi.flat(idx)] = X[fi];
        });
        fft_backward(pad, big);
        return big;
    };

    ComplexVec a = embed(f);
    ComplexVec b = embed(g);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    fft_forward(pad, a);
    const double scale = 1.0 / static_cast<double>(pad.point_count());

    SpectralField P(gr);
    Indexer bi(pad);
    for_each_mode(gr, [&](std::size_t fi, const std::array<int, 3>& k) {
        std::array<int, 3> idx{0, 0, 0};
        for (int d = 0; d < gr.dim; ++d) idx[d] = k[d] >= 0 ? k[d] : k[d] + m;
        P[fi] = a[bi.flat(idx)] * scale;
    });
    return to_physical(P);
}

double mean_value(const RealField& f) {
    long double s = 0.0L;
    for (double v : f.samples()) s += v;
    return static_cast<double>(s / static_cast<long double>(f.size()));
}

RealField zero_mode_removed(const RealField& f) {
    double m = mean_value(f);
    RealField out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] - m;
    return out;
}

}  // namespace bmtk
