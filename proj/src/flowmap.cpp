#include "flowmap.hpp"

#include <cmath>
#include <fstream>

#include "spectral_ops.hpp"

namespace bmtk {

double VelocitySeries::spacing() const {
    if (fields.size() < 2) fail_invalid("velocity series spacing needs at least two snapshots");
    return times[1] - times[0];
}

void VelocitySeries::validate() const {
    if (fields.empty() || times.size() != fields.size())
        fail_invalid("velocity series needs matching times and fields");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) fail_invalid("velocity series times must increase");
    if (times.size() >= 3) {
        double d = times[1] - times[0];
        for (std::size_t i = 2; i < times.size(); ++i)
            if (std::abs((times[i] - times[i - 1]) - d) > 1e-9 * std::max(1.0, std::abs(d)))
                fail_invalid("velocity series must be uniformly sampled");
    }
}

namespace {

inline void catmull_rom(double u, double w[4]) {
    const double u2 = u * u, u3 = u2 * u;
    w[0] = 0.5 * (-u + 2.0 * u2 - u3);
    w[1] = 0.5 * (2.0 - 5.0 * u2 + 3.0 * u3);
    w[2] = 0.5 * (u + 4.0 * u2 - 3.0 * u3);
    w[3] = 0.5 * (-u2 + u3);
}

double cubic_sample_raw(const Grid& g, const std::vector<double>& s, const std::array<double, 3>& x) {
    const int n = g.size;
    const double h = g.spacing();
    int base[3];
    double w[3][4];
    for (int d = 0; d < g.dim; ++d) {
        double u = x[d] / h;
        double fl = std::floor(u);
        base[d] = static_cast<int>(fl);
        catmull_rom(u - fl, w[d]);
    }
    auto wrap = [n](int i) { return ((i % n) + n) % n; };
    double acc = 0.0;
    if (g.dim == 2) {
        for (int a = -1; a <= 2; ++a) {
            const int ia = wrap(base[0] + a);
            double row = 0.0;
            for (int b = -1; b <= 2; ++b)
                row += w[1][b + 1] * s[static_cast<std::size_t>(ia) * n + wrap(base[1] + b)];
            acc += w[0][a + 1] * row;
        }
    } else {
        for (int a = -1; a <= 2; ++a) {
            const int ia = wrap(base[0] + a);
            double plane = 0.0;
            for (int b = -1; b <= 2; ++b) {
                const int ib = wrap(base[1] + b);
                double row = 0.0;
                for (int c = -1; c <= 2; ++c)
                    row += w[2][c + 1] *
                           s[(static_cast<std::size_t>(ia) * n + ib) * n + wrap(base[2] + c)];
                plane += w[1][b + 1] * row;
            }
            acc += w[0][a + 1] * plane;
        }
    }
    return acc;
}

/// Sampled velocity plus its spectral gradient at one time slice.
struct SliceSampler {
    Grid grid;
    Interp interp = Interp::bicubic;
    std::vector<std::vector<double>> vel;                 // dim arrays
    std::vector<std::vector<double>> grad;                // dim*dim arrays, [i*dim+d] = d_d v_i
    std::vector<ComplexVec> vel_hat, grad_hat;            // spectral path

    void sample(const std::array<double, 3>& x, double* v_out, double* g_out) const {
        const int dim = grid.dim;
        if (interp == Interp::bicubic) {
            for (int i = 0; i < dim; ++i) v_out[i] = cubic_sample_raw(grid, vel[i], x);
            for (int i = 0; i < dim * dim; ++i) g_out[i] = cubic_sample_raw(grid, grad[i], x);
        } else {
            for (int i = 0; i < dim; ++i) v_out[i] = spectral_sample_raw(grid, vel_hat[i], x);
            for (int i = 0; i < dim * dim; ++i) g_out[i] = spectral_sample_raw(grid, grad_hat[i], x);
        }
    }

    static double spectral_sample_raw(const Grid& g, const ComplexVec& coeff,
                                      const std::array<double, 3>& x);
};

double SliceSampler::spectral_sample_raw(const Grid& g, const ComplexVec& coeff,
                                         const std::array<double, 3>& x) {
    const double ws = g.wave_scale();
    double acc = 0.0;
    for_each_mode(g, [&](std::size_t f, const std::array<int, 3>& k) {
        double arg = 0.0;
        for (int d = 0; d < g.dim; ++d) arg += ws * k[d] * x[d];
        acc += coeff[f].real() * std::cos(arg) - coeff[f].imag() * std::sin(arg);
    });
    return acc;
}

SliceSampler build_sampler(const VectorField& v, Interp interp) {
    SliceSampler s;
    s.grid = v.grid();
    s.interp = interp;
    const int dim = s.grid.dim;
    s.vel.resize(dim);
    s.grad.resize(static_cast<std::size_t>(dim) * dim);
    for (int i = 0; i < dim; ++i) {
        s.vel[i] = v[i].samples();
        SpectralField Vi = to_spectral(v[i]);
        if (interp == Interp::spectral) s.vel_hat.push_back(Vi.coeff());
        for (int d = 0; d < dim; ++d) {
            SpectralField G = spectral_derivative(Vi, d, 1);
            if (interp == Interp::spectral)
                s.grad_hat.push_back(G.coeff());
            else
                s.grad[static_cast<std::size_t>(i) * dim + d] = to_physical(G).samples();
        }
    }
    return s;
}

SliceSampler average_samplers(const SliceSampler& a, const SliceSampler& b) {
    SliceSampler s = a;
    auto avg = [](std::vector<double>& x, const std::vector<double>& y) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.5 * (x[i] + y[i]);
    };
    auto avgc = [](ComplexVec& x, const ComplexVec& y) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.5 * (x[i] + y[i]);
    };
    for (std::size_t i = 0; i < s.vel.size(); ++i) avg(s.vel[i], b.vel[i]);
    for (std::size_t i = 0; i < s.grad.size(); ++i) avg(s.grad[i], b.grad[i]);
    for (std::size_t i = 0; i < s.vel_hat.size(); ++i) avgc(s.vel_hat[i], b.vel_hat[i]);
    for (std::size_t i = 0; i < s.grad_hat.size(); ++i) avgc(s.grad_hat[i], b.grad_hat[i]);
    return s;
}

/// Seed state: position + Jacobian (row-major dim x dim).
struct SeedState {
    std::array<double, 3> x{0, 0, 0};
    std::array<double, 9> jac{1, 0, 0, 0, 1, 0, 0, 0, 1};
};

struct SeedDeriv {
    std::array<double, 3> dx{0, 0, 0};
    std::array<double, 9> djac{0, 0, 0, 0, 0, 0, 0, 0, 0};
};

SeedDeriv eval_deriv(const SliceSampler& sampler, const SeedState& st, int dim) {
    SeedDeriv d;
    double v[3], G[9];
    std::array<double, 3> xw = st.x;
    sampler.sample(xw, v, G);
    for (int i = 0; i < dim; ++i) d.dx[i] = v[i];
    // dJ = G J with G[i*dim+d] = d_d v_i
    for (int i = 0; i < dim; ++i)
        for (int c = 0; c < dim; ++c) {
            double acc = 0.0;
            for (int d2 = 0; d2 < dim; ++d2) acc += G[i * dim + d2] * st.jac[d2 * 3 + c];
            d.djac[i * 3 + c] = acc;
        }
    return d;
}

double det_of(const std::array<double, 9>& J, int dim) {
    if (dim == 2) return J[0] * J[4] - J[1] * J[3];
    return J[0] * (J[4] * J[8] - J[5] * J[7]) - J[1] * (J[3] * J[8] - J[5] * J[6]) +
           J[2] * (J[3] * J[7] - J[4] * J[6]);
}

}  // namespace

std::vector<std::array<double, 3>> lattice_seeds(const Grid& g) {
    std::vector<std::array<double, 3>> seeds(g.point_count());
    for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) { seeds[i] = x; });
    return seeds;
}

TrajectorySet advect_trajectories(const VelocitySeries& driver,
                                  const std::vector<std::array<double, 3>>& seeds,
                                  const FlowMapOptions& opt) {
    driver.validate();
    if (!(opt.dt > 0.0)) fail_invalid("advect_trajectories: dt must be positive");
    const Grid& g = driver.fields[0].grid();
    for (const auto& f : driver.fields) require_divergence_free(f, "advect_trajectories: driver", opt.div_tol);

    const long long steps = std::llround(opt.horizon / opt.dt);
    if (steps < 1 || std::abs(steps * opt.dt - opt.horizon) > 1e-9 * std::max(1.0, opt.horizon))
        fail_invalid("advect_trajectories: dt must divide the horizon");
    if (!driver.steady()) {
        double span = driver.times.back() - driver.times.front();
        if (opt.horizon > span + 1e-12)
            fail_invalid("advect_trajectories: time series too short for requested horizon");
        double spacing = driver.spacing();
        if (std::abs(spacing - opt.dt) > 1e-9 * spacing)
            fail_invalid("advect_trajectories: dt must match the series sampling interval");
    }

    TrajectorySet ts;
    ts.dim = g.dim;
    ts.torus_length = g.length;
    ts.seeds = seeds;

    std::vector<SeedState> states(seeds.size());
    for (std::size_t s = 0; s < seeds.size(); ++s) states[s].x = seeds[s];

    auto record = [&](double t) {
        ts.times.push_back(t);
        for (const auto& st : states) {
            std::array<double, 3> p = st.x;
            for (int d = 0; d < g.dim; ++d) {
                p[d] = std::fmod(p[d], g.length);
                if (p[d] < 0.0) p[d] += g.length;
            }
            ts.positions.push_back(p);
            ts.jacobian_dets.push_back(det_of(st.jac, g.dim));
        }
    };

    const double t0 = driver.times.front();
    record(t0);

    SliceSampler s_begin = build_sampler(driver.fields[0], opt.interp);
    SliceSampler s_mid = s_begin, s_end = s_begin;

    const int dim = g.dim;
    for (long long step = 0; step < steps; ++step) {
        const double t = t0 + step * opt.dt;
        if (!driver.steady()) {
            if (step > 0) s_begin = std::move(s_end);
            s_end = build_sampler(driver.fields[static_cast<std::size_t>(step) + 1], opt.interp);
            s_mid = average_samplers(s_begin, s_end);
        }
        parallel_for(states.size(), [&](std::size_t si) {
            SeedState& st = states[si];
            SeedDeriv k1 = eval_deriv(s_begin, st, dim);
            SeedState s2 = st;
            for (int d = 0; d < dim; ++d) s2.x[d] += 0.5 * opt.dt * k1.dx[d];
            for (int i = 0; i < 9; ++i) s2.jac[i] += 0.5 * opt.dt * k1.djac[i];
            SeedDeriv k2 = eval_deriv(s_mid, s2, dim);
            SeedState s3 = st;
            for (int d = 0; d < dim; ++d) s3.x[d] += 0.5 * opt.dt * k2.dx[d];
            for (int i = 0; i < 9; ++i) s3.jac[i] += 0.5 * opt.dt * k2.djac[i];
            SeedDeriv k3 = eval_deriv(s_mid, s3, dim);
            SeedState s4 = st;
            for (int d = 0; d < dim; ++d) s4.x[d] += opt.dt * k3.dx[d];
            for (int i = 0; i < 9; ++i) s4.jac[i] += opt.dt * k3.djac[i];
            SeedDeriv k4 = eval_deriv(s_end, s4, dim);
            for (int d = 0; d < dim; ++d)
                st.x[d] += opt.dt / 6.0 * (k1.dx[d] + 2.0 * k2.dx[d] + 2.0 * k3.dx[d] + k4.dx[d]);
            for (int i = 0; i < 9; ++i)
                st.jac[i] += opt.dt / 6.0 * (k1.djac[i] + 2.0 * k2.djac[i] + 2.0 * k3.djac[i] + k4.djac[i]);
        });
        const bool last = step + 1 == steps;
        if (last || (step + 1) % opt.record_stride == 0) record(t + opt.dt);
    }
    return ts;
}

double volume_check(const TrajectorySet& ts) {
    if (ts.jacobian_dets.empty()) fail_invalid("volume_check: no Jacobians recorded");
    double m = 0.0;
    for (double d : ts.jacobian_dets) m = std::max(m, std::abs(d - 1.0));
    return m;
}

double composition_norm_ratio(const RealField& f, const TrajectorySet& ts, const MorreyParams& mp,
                              const WindowSet& ws) {
    const Grid& g = f.grid();
    if (ts.seed_count() != g.point_count())
        fail_invalid("composition_norm_ratio: trajectory seeds must cover the grid lattice");
    double base = morrey_norm(f, mp, ws);
    if (base == 0.0) fail_invalid("composition_norm_ratio: zero-norm field");

    const std::size_t t_last = ts.times.size() - 1;
    RealField composed(g);
    const auto& samples = f.samples();
    parallel_for(g.point_count(), [&](std::size_t i) {
        composed[i] = cubic_sample_raw(g, samples, ts.position(t_last, i));
    });
    return morrey_norm(composed, mp, ws) / base;
}

void write_trajectories_csv(const TrajectorySet& ts, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_io("cannot write " + path.string());
    out << "seed_id,t";
    for (int d = 0; d < ts.dim; ++d) out << ",x" << d + 1;
    out << ",det\n";
    char buf[64];
    for (std::size_t t = 0; t < ts.times.size(); ++t)
        for (std::size_t s = 0; s < ts.seed_count(); ++s) {
            out << s << ',';
            std::snprintf(buf, sizeof buf, "%.17g", ts.times[t]);
            out << buf;
            for (int d = 0; d < ts.dim; ++d) {
                std::snprintf(buf, sizeof buf, "%.17g", ts.position(t, s)[d]);
                out << ',' << buf;
            }
            std::snprintf(buf, sizeof buf, "%.17g", ts.det(t, s));
            out << ',' << buf << '\n';
        }
}

double cubic_sample(const RealField& f, const std::array<double, 3>& x) {
    return cubic_sample_raw(f.grid(), f.samples(), x);
}

double spectral_sample(const SpectralField& F, const std::array<double, 3>& x) {
    return SliceSampler::spectral_sample_raw(F.grid(), F.coeff(), x);
}

}  // namespace bmtk
