// Acceptance suite: one criterion per check, one PASS/FAIL line each.
// Exit status 0 only when every criterion holds at its stated tolerance.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "commutator.hpp"
#include "diagnostics.hpp"
#include "experiment.hpp"
#include "field_io.hpp"
#include "paraproduct.hpp"
#include "test_support.hpp"

using namespace bmtk;
using namespace bmtk::test;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

VelocitySeries steady(const VectorField& v) {
    VelocitySeries s;
    s.times = {0.0};
    s.fields.push_back(v);
    return s;
}

char buffer[512];

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    std::snprintf(buffer, sizeof buffer, f, args...);
    return std::string(buffer);
}

// 1. reconstruct(decompose(f)) = f, 50 random fields, N=256, <= 1e-12.
Outcome criterion_reconstruction() {
    Grid g(2, 256, kTwoPi);
    double worst = 0.0;
    std::vector<double> errs(50);
    parallel_for(50, [&](std::size_t t) {
        RealField f = random_band_limited(g, 1000 + t);
        for (auto& s : f.samples()) s += 0.1 * static_cast<double>(t % 3);
        DyadicDecomposition d = decompose(f, t % 2 == 0);
        errs[t] = rel_field_error(reconstruct(d), f);
    });
    for (double e : errs) worst = std::max(worst, e);
    return {worst <= 1e-12, fmt("max relative reconstruction error %.3e (tol 1e-12)", worst)};
}

// 2. Bony identity residual <= 1e-12 on 50 random pairs at N=128.
Outcome criterion_bony() {
    Grid g(2, 128, kTwoPi);
    std::vector<double> residuals(50);
    parallel_for(50, [&](std::size_t t) {
        RealField f = random_band_limited(g, 2000 + t);
        RealField h = random_band_limited(g, 3000 + t);
        for (auto& s : f.samples()) s += 0.2;
        for (auto& s : h.samples()) s -= 0.1;
        residuals[t] = bony_split(f, h).residual;
    });
    double worst = 0.0;
    for (double r : residuals) worst = std::max(worst, r);
    return {worst <= 1e-12, fmt("max relative residual %.3e (tol 1e-12)", worst)};
}

// 3. Integral-image Morrey equals exhaustive brute force at N=16.
Outcome criterion_morrey_oracle() {
    Grid g(2, 16, kTwoPi);
    const MorreyParams params[] = {{4.0, 2.0}, {2.0, 2.0}, {6.0, 1.0}, {3.0, 1.5}};
    WindowSet ws;
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        RealField f = t % 2 == 0 ? random_band_limited(g, 4000 + t) : bump_product(g, 4000 + t);
        for (const auto& mp : params) {
            double fast = morrey_norm(f, mp, ws);
            double slow = brute_force_morrey(f, mp, ws);
            worst = std::max(worst, rel_error(fast, slow));
        }
    }
    return {worst <= 1e-12, fmt("max oracle deviation %.3e over 20 fields x 4 params", worst)};
}

// 4. Bernstein bracket [1/C, C] with C stable within 30% between N=64 and 128.
Outcome criterion_bernstein() {
    MorreyParams mp{4.0, 2.0};
    std::vector<double> constants;
    for (int n : {64, 128}) {
        Grid g(2, n, kTwoPi);
        WindowSet ws;
        std::vector<double> lo(20, kInf), hi(20, 0.0);
        parallel_for(20, [&](std::size_t t) {
            RealField f = random_band_limited(g, 5000 + t);
            double fn = morrey_norm(f, mp, ws);
            DyadicDecomposition d = decompose(f, true);
            for (int j = d.j_min; j <= d.j_max; ++j) {
                double bn = morrey_norm(d.block(j), mp, ws);
                if (!(bn > 1e-12 * fn)) continue;
                double ratio = morrey_norm(gradient(d.block(j)), mp, ws) / (std::pow(2.0, j) * bn);
                lo[t] = std::min(lo[t], ratio);
                hi[t] = std::max(hi[t], ratio);
            }
        });
        double lo_all = kInf, hi_all = 0.0;
        for (int t = 0; t < 20; ++t) {
            lo_all = std::min(lo_all, lo[t]);
            hi_all = std::max(hi_all, hi[t]);
        }
        if (!(lo_all > 0.0) || !std::isfinite(hi_all))
            return {false, "degenerate ratio bracket"};
        constants.push_back(std::max(hi_all, 1.0 / lo_all));
    }
    double spread = rel_error(constants[0], constants[1]);
    return {spread <= 0.3,
            fmt("C(64)=%.3f C(128)=%.3f spread %.1f%% (tol 30%%)", constants[0], constants[1],
                100.0 * spread)};
}

// 5/6. Commutator estimates: finite constants, <= 30% drift, exact zero for
// constant advectors.
Outcome criterion_commutator(double s, bool variant35) {
    BMParams bp{s, {4.0, 2.0}, 2.0, true};
    CommutatorSplit split = CommutatorSplit::solver_default(bp);

    Grid g64(2, 64, kTwoPi);
    VectorField vc(g64);
    for (auto& x : vc[0].samples()) x = 0.8;
    for (auto& x : vc[1].samples()) x = -0.4;
    RealField theta_c = random_band_limited(g64, 6000);
    WindowSet ws;
    EstimateReport trivial = variant35 ? lemma35_report(vc, theta_c, bp, split, ws)
                                       : lemma34_report(vc, theta_c, bp, split, ws);
    if (trivial.ratio != 0.0) return {false, "constant advector did not yield ratio 0"};

    std::vector<double> constants;
    for (int n : {64, 128}) {
        Grid g(2, n, kTwoPi);
        std::vector<double> ratios(20);
        parallel_for(20, [&](std::size_t t) {
            VectorField v = random_divergence_free(g, 7000 + t, 3.0);
            RealField theta = random_band_limited(g, 8000 + t, 3.0);
            EstimateReport rep = variant35 ? lemma35_report(v, theta, bp, split, ws)
                                           : lemma34_report(v, theta, bp, split, ws);
            ratios[t] = rep.ratio;
        });
        double worst = 0.0;
        for (double r : ratios) {
            if (!std::isfinite(r)) return Outcome{false, "non-finite ratio"};
            worst = std::max(worst, r);
        }
        constants.push_back(worst);
    }
    double spread = rel_error(constants[0], constants[1]);
    return {spread <= 0.3,
            fmt("constant %.3f -> %.3f, spread %.1f%% (tol 30%%), constant advector exact 0",
                constants[0], constants[1], 100.0 * spread)};
}

// 7. Volume preservation and composition invariance of the flow maps.
Outcome criterion_flowmap() {
    Grid g(2, 128, kTwoPi);
    VectorField tg = dealias(leray_project(taylor_green(g)));
    FlowMapOptions vol_opt;
    vol_opt.dt = 1e-3;
    vol_opt.horizon = 1.0;
    vol_opt.record_stride = 100;
    std::vector<std::array<double, 3>> seeds;
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) seeds.push_back({i * kTwoPi / 16, j * kTwoPi / 16, 0.0});
    double vol = volume_check(advect_trajectories(steady(tg), seeds, vol_opt));
    if (!(vol <= 1e-6)) return {false, fmt("volume defect %.3e (tol 1e-6)", vol)};

    auto deviation = [&](int n) {
        Grid gn(2, n, kTwoPi);
        RealField f = single_mode(gn, {1, 0, 0}) + 0.5 * single_mode(gn, {0, 2, 0}, 1.0, 0.4);
        FlowMapOptions opt;
        opt.dt = 1e-3;
        opt.horizon = 0.5;
        opt.record_stride = 1 << 20;
        TrajectorySet ts = advect_trajectories(steady(shear_flow(gn)), lattice_seeds(gn), opt);
        WindowSet ws;
        return std::abs(composition_norm_ratio(f, ts, MorreyParams{4.0, 2.0}, ws) - 1.0);
    };
    double d128 = deviation(128);
    double d256 = deviation(256);
    bool pass = d128 <= 0.02 && d256 <= 0.01;
    return {pass, fmt("volume defect %.3e; composition deviation %.4f%% @128, %.4f%% @256",
                      vol, 100.0 * d128, 100.0 * d256)};
}

// 8. Steady states persist under the direct integrator.
Outcome criterion_steady() {
    Grid g(2, 128, kTwoPi);
    VectorField tg = dealias(leray_project(taylor_green(g)));
    FlowState euler{0.0, tg, std::nullopt};
    double e0 = l2_norm(tg);
    for (int i = 0; i < 1000; ++i) euler = direct_step(euler, 1e-3);
    double euler_drift = l2_distance(euler.v, tg) / e0;
    if (!(euler_drift < 1e-6)) return {false, fmt("flow drift %.3e (tol 1e-6)", euler_drift)};

    VectorField vb = random_divergence_free(g, 9000, 3.0, 0.3);
    FlowState mhd{0.0, vb, vb};
    double m0 = l2_norm(dealias(vb));
    for (int i = 0; i < 1000; ++i) mhd = direct_step(mhd, 1e-3);
    double mhd_drift = std::max(l2_distance(mhd.v, dealias(vb)), l2_distance(*mhd.b, dealias(vb))) / m0;
    bool pass = mhd_drift < 1e-6;
    return {pass, fmt("flow drift %.3e, coupled drift %.3e (tol 1e-6)", euler_drift, mhd_drift)};
}

// 9. Successive approximation: contraction and agreement with direct stepping.
Outcome criterion_iteration() {
    Grid g(2, 128, kTwoPi);
    IterateOptions opt;
    opt.T = 0.1;
    opt.dt = 1e-3;

    VectorField tg = leray_project(taylor_green(g));
    auto [esol, erep] = euler_iterate(tg, opt);
    if (!erep.converged) return {false, "flow iteration did not converge"};
    for (std::size_t i = 1; i < erep.ratios.size(); ++i)
        if (!(erep.ratios[i] <= 0.6))
            return {false, fmt("flow contraction ratio %.3f > 0.6", erep.ratios[i])};
    MhdSeries edirect = run_direct(FlowState{0.0, tg, std::nullopt}, opt.T, opt.dt);
    double egap = l2_distance(esol.fields.back(), edirect.v.fields.back());
    if (!(egap <= 1e-5)) return {false, fmt("flow limit gap %.3e (tol 1e-5)", egap)};

    VectorField v0 = random_divergence_free(g, 9100, 3.0, 0.15);
    VectorField b0 = random_divergence_free(g, 9200, 3.0, 0.1);
    auto [msol, mrep] = mhd_iterate(v0, b0, opt);
    if (!mrep.converged) return {false, "coupled iteration did not converge"};
    double worst_ratio = 0.0;
    for (std::size_t i = 1; i < mrep.ratios.size(); ++i)
        worst_ratio = std::max(worst_ratio, mrep.ratios[i]);
    if (!(worst_ratio <= 0.6))
        return {false, fmt("coupled contraction ratio %.3f > 0.6", worst_ratio)};
    MhdSeries mdirect = run_direct(FlowState{0.0, v0, b0}, opt.T, opt.dt);
    double mgap = std::max(l2_distance(msol.v.fields.back(), mdirect.v.fields.back()),
                           l2_distance(msol.b.fields.back(), mdirect.b.fields.back()));
    bool pass = mgap <= 1e-5;
    return {pass, fmt("flow gap %.3e, coupled gap %.3e (tol 1e-5), worst coupled ratio %.3f",
                      egap, mgap, worst_ratio)};
}

// 10. Blow-up diagnostics consistency on 2D runs.
Outcome criterion_diagnostics() {
    Grid g(2, 128, kTwoPi);
    BMParams bp{2.5, {4.0, 2.0}, 2.0, false};
    WindowSet ws;

    auto check_run = [&](const VectorField& v0, bool steady_data,
                         std::string& detail) -> bool {
        MhdSeries run = run_direct(FlowState{0.0, v0, std::nullopt}, 1.0, 1e-3);
        DiagnosticsSeries d = blowup_diagnostics(run, bp, ws);
        double w0 = d.sup_vorticity.front();
        double lo = w0, hi = w0;
        for (std::size_t i = 0; i < d.times.size(); ++i) {
            lo = std::min(lo, d.sup_vorticity[i]);
            hi = std::max(hi, d.sup_vorticity[i]);
            if (d.b0_inf_inf[i] > d.b0_inf_1[i] * (1.0 + 1e-12)) {
                detail = "sequence-norm ordering violated";
                return false;
            }
        }
        double drift = (hi - lo) / w0;
        if (drift > 0.01) {
            detail = fmt("vorticity sup drift %.3f%% (tol 1%%)", 100.0 * drift);
            return false;
        }
        if (steady_data) {
            double bkm = d.bkm_integral.back();
            double want = run.v.times.back() * w0;
            if (rel_error(bkm, want) > 0.01) {
                detail = fmt("time integral off by %.3f%%", 100.0 * rel_error(bkm, want));
                return false;
            }
        }
        detail = fmt("drift %.4f%%", 100.0 * drift);
        return true;
    };

    std::string d1, d2;
    bool ok1 = check_run(dealias(leray_project(taylor_green(g))), true, d1);
    bool ok2 = check_run(random_divergence_free(g, 9300, 3.0, 0.3), false, d2);
    return {ok1 && ok2, "steady: " + d1 + "; random: " + d2};
}

// 11. Byte-identical reports on repeated experiments.
Outcome criterion_determinism() {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "bmtk_acceptance_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };

    auto run_verify = [&](const std::string& name) {
        Json cfg;
        cfg["command"] = "verify";
        cfg["lemma"] = "3.4";
        cfg["grid"] = Json{{"dim", 2}, {"size", 32}, {"length", kTwoPi}};
        cfg["trials"] = 4;
        cfg["seed"] = 11;
        cfg["out"] = (dir / name).string();
        return run_experiment(ExperimentConfig::from_json(cfg)).exit_code;
    };
    if (run_verify("v1.json") != 0 || run_verify("v2.json") != 0)
        return {false, "verify run failed"};
    if (slurp(dir / "v1.json") != slurp(dir / "v2.json"))
        return {false, "verify reports differ between repeats"};

    auto run_euler = [&](const std::string& name) {
        Json cfg;
        cfg["command"] = "euler";
        cfg["grid"] = Json{{"dim", 2}, {"size", 32}, {"length", kTwoPi}};
        cfg["seed"] = 11;
        cfg["solver"] = Json{{"T", 0.05}, {"dt", 5e-3}, {"scheme", "direct"}, {"init", "random"},
                             {"amplitude", 0.3}};
        cfg["out"] = (dir / name).string();
        return run_experiment(ExperimentConfig::from_json(cfg)).exit_code;
    };
    if (run_euler("r1") != 0 || run_euler("r2") != 0) return {false, "solver run failed"};
    bool same_report = slurp(dir / "r1" / "report.json") == slurp(dir / "r2" / "report.json");
    bool same_csv = slurp(dir / "r1" / "diagnostics.csv") == slurp(dir / "r2" / "diagnostics.csv");
    fs::remove_all(dir);
    if (!same_report) return {false, "solver reports differ between repeats"};
    if (!same_csv) return {false, "diagnostics differ between repeats"};
    return {true, "verify + solver artifacts byte-identical across repeats"};
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"partition-of-unity reconstruction", criterion_reconstruction},
        {"paraproduct identity", criterion_bony},
        {"morrey-norm oracle equivalence", criterion_morrey_oracle},
        {"block derivative bracket stability", criterion_bernstein},
        {"commutator estimate, order 2.5", [] { return criterion_commutator(2.5, false); }},
        {"commutator estimate, order 1.5", [] { return criterion_commutator(1.5, true); }},
        {"volume preservation and composition invariance", criterion_flowmap},
        {"steady-state preservation", criterion_steady},
        {"successive-approximation contraction", criterion_iteration},
        {"blow-up diagnostics consistency", criterion_diagnostics},
        {"experiment determinism", criterion_determinism},
    };

    int selected = argc > 1 ? std::atoi(argv[1]) : 0;
    bool all_pass = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (selected > 0 && static_cast<int>(i + 1) != selected) continue;
        auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%2zu/11] %s %s (%.1fs): %s\n", i + 1, out.pass ? "PASS" : "FAIL",
                    criteria[i].name, secs, out.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && out.pass;
    }
    return all_pass ? 0 : 1;
}
