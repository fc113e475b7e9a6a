#include "solver.hpp"

#include <cmath>

#include "spectral_ops.hpp"

namespace bmtk {

void FlowState::validate(double div_tol) const {
    require_divergence_free(v, "FlowState: v", div_tol);
    if (b) {
        require_same_grid(v.grid(), b->grid(), "FlowState");
        require_divergence_free(*b, "FlowState: b", div_tol);
    }
}

namespace {

using SpecVec = std::vector<SpectralField>;

SpecVec to_spec(const VectorField& v) {
    SpecVec V;
    for (int d = 0; d < v.dim(); ++d) V.push_back(to_spectral(v[d]));
    return V;
}

VectorField to_phys(const SpecVec& V) {
    VectorField v(V.at(0).grid());
    for (std::size_t d = 0; d < V.size(); ++d) v[static_cast<int>(d)] = to_physical(V[d]);
    return v;
}

SpecVec axpy(const SpecVec& base, double a, const SpecVec& dir) {
    SpecVec out = base;
    for (std::size_t d = 0; d < out.size(); ++d)
        for (std::size_t i = 0; i < out[d].size(); ++i) out[d][i] += a * dir[d][i];
    return out;
}

void accumulate_rk4(SpecVec& state, double dt, const SpecVec& k1, const SpecVec& k2,
                    const SpecVec& k3, const SpecVec& k4) {
    const double c = dt / 6.0;
    for (std::size_t d = 0; d < state.size(); ++d)
        for (std::size_t i = 0; i < state[d].size(); ++i)
            state[d][i] += c * (k1[d][i] + 2.0 * k2[d][i] + 2.0 * k3[d][i] + k4[d][i]);
}

/// Physical drift samples for one stage.
struct Drift {
    std::vector<std::vector<double>> comps;

    static Drift from(const VectorField& v) {
        Drift d;
        for (int c = 0; c < v.dim(); ++c) d.comps.push_back(v[c].samples());
        return d;
    }
    static Drift average(const Drift& a, const Drift& b) {
        Drift d = a;
        for (std::size_t c = 0; c < d.comps.size(); ++c)
            for (std::size_t i = 0; i < d.comps[c].size(); ++i)
                d.comps[c][i] = 0.5 * (d.comps[c][i] + b.comps[c][i]);
        return d;
    }
    double sup() const {
        double m = 0.0;
        for (std::size_t i = 0; i < comps[0].size(); ++i) {
            double s = 0.0;
            for (const auto& c : comps) s += c[i] * c[i];
            m = std::max(m, s);
        }
        return std::sqrt(m);
    }
};

/// -P[(w.grad)u] in spectral form: the advective product is dealiased and the
/// pressure gradient is removed by the same Riesz-transform solve per stage.
SpecVec transport_rhs(const Drift& w, const SpecVec& U) {
    const Grid& g = U[0].grid();
    const int dim = g.dim;
    SpecVec rhs;
    rhs.reserve(dim);
    for (int i = 0; i < dim; ++i) {
        std::vector<RealField> du;
        for (int d = 0; d < dim; ++d) du.push_back(to_physical(spectral_derivative(U[i], d, 1)));
        RealField acc(g);
        for (int d = 0; d < dim; ++d)
            for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += w.comps[d][p] * du[d][p];
        SpectralField A = to_spectral(acc);
        dealias_in_place(A);
        for (auto& c : A.coeff()) c = -c;
        rhs.push_back(std::move(A));
    }
    project_divergence_free(rhs);
    return rhs;
}

/// Coupled rhs pair for the linearized system driven by (w, a):
///   dv = -P[(w.grad)v - (a.grad)b],  db = -P[(w.grad)b - (a.grad)v].
/// Projecting db enforces div b = 0, which the frozen-driver system does not
/// propagate by itself away from the converged limit.
std::pair<SpecVec, SpecVec> coupled_rhs(const Drift& w, const Drift& a, const SpecVec& V,
                                        const SpecVec& B) {
    const Grid& g = V[0].grid();
    const int dim = g.dim;
    auto advected = [&](const Drift& drift, const SpecVec& U, int i) {
        std::vector<RealField> du;
        for (int d = 0; d < dim; ++d) du.push_back(to_physical(spectral_derivative(U[i], d, 1)));
        RealField acc(g);
        for (int d = 0; d < dim; ++d)
            for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += drift.comps[d][p] * du[d][p];
        return acc;
    };
    SpecVec dv, db;
    for (int i = 0; i < dim; ++i) {
        RealField v_term = advected(w, V, i);
        RealField b_term = advected(a, B, i);
        RealField diff(g);
        for (std::size_t p = 0; p < diff.size(); ++p) diff[p] = b_term[p] - v_term[p];
        SpectralField D = to_spectral(diff);
        dealias_in_place(D);
        dv.push_back(std::move(D));

        RealField bv_term = advected(w, B, i);
        RealField vb_term = advected(a, V, i);
        RealField bdiff(g);
        for (std::size_t p = 0; p < bdiff.size(); ++p) bdiff[p] = vb_term[p] - bv_term[p];
        SpectralField DB = to_spectral(bdiff);
        dealias_in_place(DB);
        db.push_back(std::move(DB));
    }
    project_divergence_free(dv);
    project_divergence_free(db);
    return {std::move(dv), std::move(db)};
}

void check_cfl(double speed, double dt, double h, double limit) {
    if (speed * dt / h > limit)
        fail_cfl("CFL violation: |v|_max dt / h = " + std::to_string(speed * dt / h) + " > " +
                 std::to_string(limit));
}

long long step_count(double T, double dt) {
    if (!(dt > 0.0)) fail_invalid("dt must be positive");
    long long n = std::llround(T / dt);
    if (n < 1 || std::abs(n * dt - T) > 1e-9 * std::max(1.0, T))
        fail_invalid("dt must divide the horizon T");
    return n;
}

/// Stage drifts for step i of a (possibly steady) series.
struct StageDrifts {
    Drift begin, mid, end;
};

class DriftProvider {
  public:
    explicit DriftProvider(const VelocitySeries& series) : series_(series) {
        series_.validate();
        if (series_.steady()) {
            steady_ = Drift::from(series_.fields[0]);
        }
    }

    StageDrifts stages(long long step) const {
        if (series_.steady()) return {steady_, steady_, steady_};
        const auto i = static_cast<std::size_t>(step);
        Drift b = Drift::from(series_.fields[i]);
        Drift e = Drift::from(series_.fields[i + 1]);
        Drift m = Drift::average(b, e);
        return {std::move(b), std::move(m), std::move(e)};
    }

  private:
    const VelocitySeries& series_;
    Drift steady_;
};

}  // namespace

FlowState direct_step(const FlowState& state, double dt, double cfl_limit) {
    state.validate();
    const Grid& g = state.v.grid();
    double speed = sup_norm(state.v) + (state.b ? sup_norm(*state.b) : 0.0);
    check_cfl(speed, dt, g.spacing(), cfl_limit);

    SpecVec V = to_spec(state.v);
    for (auto& c : V) dealias_in_place(c);
    if (!state.b) {
        auto rhs = [&](const SpecVec& U) { return transport_rhs(Drift::from(to_phys(U)), U); };
        SpecVec k1 = rhs(V);
        SpecVec k2 = rhs(axpy(V, 0.5 * dt, k1));
        SpecVec k3 = rhs(axpy(V, 0.5 * dt, k2));
        SpecVec k4 = rhs(axpy(V, dt, k3));
        accumulate_rk4(V, dt, k1, k2, k3, k4);
        FlowState out{state.time + dt, to_phys(V), std::nullopt};
        return out;
    }

    SpecVec B = to_spec(*state.b);
    for (auto& c : B) dealias_in_place(c);
    auto rhs = [&](const SpecVec& U, const SpecVec& W) {
        return coupled_rhs(Drift::from(to_phys(U)), Drift::from(to_phys(W)), U, W);
    };
    auto [k1v, k1b] = rhs(V, B);
    auto [k2v, k2b] = rhs(axpy(V, 0.5 * dt, k1v), axpy(B, 0.5 * dt, k1b));
    auto [k3v, k3b] = rhs(axpy(V, 0.5 * dt, k2v), axpy(B, 0.5 * dt, k2b));
    auto [k4v, k4b] = rhs(axpy(V, dt, k3v), axpy(B, dt, k3b));
    accumulate_rk4(V, dt, k1v, k2v, k3v, k4v);
    accumulate_rk4(B, dt, k1b, k2b, k3b, k4b);
    return FlowState{state.time + dt, to_phys(V), to_phys(B)};
}

MhdSeries run_direct(const FlowState& init, double T, double dt, double cfl_limit) {
    const long long n = step_count(T, dt);
    MhdSeries series;
    FlowState state = init;
    state.v = dealias(state.v);
    if (state.b) *state.b = dealias(*state.b);
    series.v.times.push_back(state.time);
    series.v.fields.push_back(state.v);
    if (state.b) {
        series.b.times.push_back(state.time);
        series.b.fields.push_back(*state.b);
    }
    for (long long i = 0; i < n; ++i) {
        state = direct_step(state, dt, cfl_limit);
        series.v.times.push_back(state.time);
        series.v.fields.push_back(state.v);
        if (state.b) {
            series.b.times.push_back(state.time);
            series.b.fields.push_back(*state.b);
        }
    }
    return series;
}

VelocitySeries solve_linear_transport(const VelocitySeries& w, const VectorField& v0, double T,
                                      double dt, double cfl_limit) {
    const long long n = step_count(T, dt);
    for (const auto& f : w.fields) require_divergence_free(f, "solve_linear_transport: w");
    require_divergence_free(v0, "solve_linear_transport: v0");
    if (!w.steady()) {
        if (static_cast<long long>(w.fields.size()) < n + 1)
            fail_invalid("solve_linear_transport: time series too short for requested horizon");
        if (std::abs(w.spacing() - dt) > 1e-9 * dt)
            fail_invalid("solve_linear_transport: dt must match the drift sampling interval");
    }
    DriftProvider drifts(w);
    const Grid& g = v0.grid();

    SpecVec V = to_spec(v0);
    for (auto& c : V) dealias_in_place(c);

    VelocitySeries out;
    out.times.push_back(0.0);
    out.fields.push_back(to_phys(V));
    for (long long i = 0; i < n; ++i) {
        StageDrifts st = drifts.stages(i);
        check_cfl(st.begin.sup(), dt, g.spacing(), cfl_limit);
        SpecVec k1 = transport_rhs(st.begin, V);
        SpecVec k2 = transport_rhs(st.mid, axpy(V, 0.5 * dt, k1));
        SpecVec k3 = transport_rhs(st.mid, axpy(V, 0.5 * dt, k2));
        SpecVec k4 = transport_rhs(st.end, axpy(V, dt, k3));
        accumulate_rk4(V, dt, k1, k2, k3, k4);
        out.times.push_back((i + 1) * dt);
        out.fields.push_back(to_phys(V));
    }
    return out;
}

MhdSeries solve_linear_mhd(const VelocitySeries& w, const VelocitySeries& a, const VectorField& v0,
                           const VectorField& b0, double T, double dt, double cfl_limit) {
    const long long n = step_count(T, dt);
    for (const auto& f : w.fields) require_divergence_free(f, "solve_linear_mhd: w");
    for (const auto& f : a.fields) require_divergence_free(f, "solve_linear_mhd: a");
    require_divergence_free(v0, "solve_linear_mhd: v0");
    require_divergence_free(b0, "solve_linear_mhd: b0");
    if (w.fields.size() != a.fields.size())
        fail_invalid("solve_linear_mhd: drivers must share sampling");
    if (!w.steady() && static_cast<long long>(w.fields.size()) < n + 1)
        fail_invalid("solve_linear_mhd: time series too short for requested horizon");

    DriftProvider wd(w), ad(a);
    const Grid& g = v0.grid();
    SpecVec V = to_spec(v0), B = to_spec(b0);
    for (auto& c : V) dealias_in_place(c);
    for (auto& c : B) dealias_in_place(c);

    MhdSeries out;
    out.v.times.push_back(0.0);
    out.v.fields.push_back(to_phys(V));
    out.b.times.push_back(0.0);
    out.b.fields.push_back(to_phys(B));
    for (long long i = 0; i < n; ++i) {
        StageDrifts ws = wd.stages(i);
        StageDrifts as = ad.stages(i);
        check_cfl(ws.begin.sup() + as.begin.sup(), dt, g.spacing(), cfl_limit);
        auto [k1v, k1b] = coupled_rhs(ws.begin, as.begin, V, B);
        auto [k2v, k2b] = coupled_rhs(ws.mid, as.mid, axpy(V, 0.5 * dt, k1v), axpy(B, 0.5 * dt, k1b));
        auto [k3v, k3b] = coupled_rhs(ws.mid, as.mid, axpy(V, 0.5 * dt, k2v), axpy(B, 0.5 * dt, k2b));
        auto [k4v, k4b] = coupled_rhs(ws.end, as.end, axpy(V, dt, k3v), axpy(B, dt, k3b));
        accumulate_rk4(V, dt, k1v, k2v, k3v, k4v);
        accumulate_rk4(B, dt, k1b, k2b, k3b, k4b);
        out.v.times.push_back((i + 1) * dt);
        out.v.fields.push_back(to_phys(V));
        out.b.times.push_back((i + 1) * dt);
        out.b.fields.push_back(to_phys(B));
    }
    return out;
}

Json IterationReport::to_json() const {
    Json j;
    j["horizon"] = horizon;
    j["tolerance"] = tolerance;
    j["converged"] = converged;
    j["iterations"] = iterations;
    Json sup = Json::array(), diff = Json::array(), rat = Json::array();
    for (double v : sup_norms) sup.push_back(json_number(v));
    for (double v : diff_norms) diff.push_back(json_number(v));
    for (double v : ratios) rat.push_back(json_number(v));
    j["sup_norms"] = sup;
    j["diff_norms"] = diff;
    j["contraction_ratios"] = rat;
    return j;
}

namespace {

double series_sup_norm(const VelocitySeries& s, const BMParams& bp, const WindowSet& ws) {
    std::vector<double> values(s.fields.size());
    parallel_for(values.size(), [&](std::size_t i) { values[i] = besov_morrey_norm(s.fields[i], bp, ws); });
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
}

double series_diff_norm(const VelocitySeries& a, const VelocitySeries& b, const BMParams& bp,
                        const WindowSet& ws) {
    std::vector<double> values(a.fields.size());
    parallel_for(values.size(), [&](std::size_t i) {
        values[i] = besov_morrey_norm(a.fields[i] - b.fields[i], bp, ws);
    });
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
}

VelocitySeries zero_series(const Grid& g, double T, double dt) {
    const long long n = step_count(T, dt);
    VelocitySeries s;
    for (long long i = 0; i <= n; ++i) {
        s.times.push_back(i * dt);
        s.fields.emplace_back(g);
    }
    return s;
}

}  // namespace

std::pair<VelocitySeries, IterationReport> euler_iterate(const VectorField& v0,
                                                         const IterateOptions& opt) {
    opt.bp.validate_solver_range(v0.grid().dim);
    require_divergence_free(v0, "euler_iterate: v0");
    VectorField init = dealias(v0);

    BMParams norm_s = opt.bp;
    norm_s.homogeneous = false;
    BMParams norm_sm1 = norm_s;
    norm_sm1.s = opt.bp.s - 1.0;

    IterationReport rep;
    rep.horizon = opt.T;
    const double scale = besov_morrey_norm(init, norm_s, opt.window);
    rep.tolerance = opt.tol * scale;

    VelocitySeries prev = zero_series(init.grid(), opt.T, opt.dt);
    VelocitySeries current;
    for (int m = 0; m < opt.max_iter; ++m) {
        VectorField truncated_init = low_pass(init, m + 1);
        current = solve_linear_transport(prev, truncated_init, opt.T, opt.dt, opt.cfl_limit);
        rep.iterations = m + 1;
        rep.sup_norms.push_back(series_sup_norm(current, norm_s, opt.window));
        double d = series_diff_norm(current, prev, norm_sm1, opt.window);
        rep.diff_norms.push_back(d);
        if (rep.diff_norms.size() >= 2) {
            double dprev = rep.diff_norms[rep.diff_norms.size() - 2];
            rep.ratios.push_back(dprev > 0.0 ? d / dprev : 0.0);
        }
        if (d <= rep.tolerance) {
            rep.converged = true;
            break;
        }
        prev = std::move(current);
        current = VelocitySeries{};
    }
    if (!rep.converged) current = std::move(prev);
    return {std::move(current), rep};
}

std::pair<MhdSeries, IterationReport> mhd_iterate(const VectorField& v0, const VectorField& b0,
                                                  const IterateOptions& opt) {
    opt.bp.validate_solver_range(v0.grid().dim);
    require_divergence_free(v0, "mhd_iterate: v0");
    require_divergence_free(b0, "mhd_iterate: b0");
    VectorField vi = dealias(v0), bi = dealias(b0);

    BMParams norm_s = opt.bp;
    norm_s.homogeneous = false;
    BMParams norm_sm1 = norm_s;
    norm_sm1.s = opt.bp.s - 1.0;

    IterationReport rep;
    rep.horizon = opt.T;
    const double scale =
        besov_morrey_norm(vi, norm_s, opt.window) + besov_morrey_norm(bi, norm_s, opt.window);
    rep.tolerance = opt.tol * scale;

    MhdSeries prev;
    prev.v = zero_series(vi.grid(), opt.T, opt.dt);
    prev.b = zero_series(vi.grid(), opt.T, opt.dt);
    MhdSeries current;
    for (int m = 0; m < opt.max_iter; ++m) {
        VectorField v_init = low_pass(vi, m + 1);
        VectorField b_init = low_pass(bi, m + 1);
        current = solve_linear_mhd(prev.v, prev.b, v_init, b_init, opt.T, opt.dt, opt.cfl_limit);
        rep.iterations = m + 1;
        rep.sup_norms.push_back(series_sup_norm(current.v, norm_s, opt.window) +
                                series_sup_norm(current.b, norm_s, opt.window));
        double d = series_diff_norm(current.v, prev.v, norm_sm1, opt.window) +
                   series_diff_norm(current.b, prev.b, norm_sm1, opt.window);
        rep.diff_norms.push_back(d);
        if (rep.diff_norms.size() >= 2) {
            double dprev = rep.diff_norms[rep.diff_norms.size() - 2];
            rep.ratios.push_back(dprev > 0.0 ? d / dprev : 0.0);
        }
        if (d <= rep.tolerance) {
            rep.converged = true;
            break;
        }
        prev = std::move(current);
        current = MhdSeries{};
    }
    if (!rep.converged) current = std::move(prev);
    return {std::move(current), rep};
}

std::pair<VectorField, VectorField> elsasser(const VectorField& v, const VectorField& b) {
    require_same_grid(v.grid(), b.grid(), "elsasser");
    return {v + b, v - b};
}

std::pair<VectorField, VectorField> elsasser_inverse(const VectorField& zplus,
                                                     const VectorField& zminus) {
    require_same_grid(zplus.grid(), zminus.grid(), "elsasser_inverse");
    return {0.5 * (zplus + zminus), 0.5 * (zplus - zminus)};
}

double flow_energy(const FlowState& state) {
    double e = l2_norm(state.v);
    double eb = state.b ? l2_norm(*state.b) : 0.0;
    return e * e + eb * eb;
}

}  // namespace bmtk
