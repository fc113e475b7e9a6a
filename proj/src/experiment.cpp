#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "commutator.hpp"
#include "corpus.hpp"
#include "diagnostics.hpp"
#include "field_io.hpp"
#include "paraproduct.hpp"
#include "spectral_ops.hpp"

namespace bmtk {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

namespace {

double parse_real(const Json& j, double fallback) {
    if (j.is_null()) return fallback;
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "inf" || s == "Inf" || s == "INF") return kInf;
        return std::stod(s);
    }
    return j.get<double>();
}

Json echo_real(double v) { return json_number(v); }

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
    ExperimentConfig c;
    c.command = j.at("command").get<std::string>();
    if (j.contains("grid")) {
        const Json& g = j["grid"];
        c.grid = Grid(g.value("dim", 2), g.value("size", 128), g.value("length", kTwoPi));
    }
    if (j.contains("bm")) {
        const Json& b = j["bm"];
        c.bm.s = b.value("s", 2.5);
        c.bm.morrey.p = parse_real(b.contains("p") ? b["p"] : Json(), 4.0);
        c.bm.morrey.q = parse_real(b.contains("q") ? b["q"] : Json(), 2.0);
        c.bm.r = parse_real(b.contains("r") ? b["r"] : Json(), 2.0);
        c.bm.homogeneous = b.value("homogeneous", false);
    }
    if (j.contains("window")) {
        const Json& w = j["window"];
        c.window.stride = w.value("stride", 1);
        c.window.k_max = w.value("kmax", 0);
    }
    c.seed = j.value("seed", 0ULL);
    c.trials = j.value("trials", 20);
    c.lemma = j.value("lemma", "");
    c.variant = j.value("variant", "hom");
    if (j.contains("solver")) {
        const Json& s = j["solver"];
        c.T = s.value("T", 1.0);
        c.dt = s.value("dt", 1e-3);
        c.tol = s.value("tol", 1e-8);
        c.max_iter = s.value("max_iter", 40);
        c.cfl_limit = s.value("cfl", 0.5);
        c.amplitude = s.value("amplitude", 1.0);
        c.scheme = s.value("scheme", "direct");
        c.init = s.value("init", "taylor-green");
        c.binit = s.value("binit", "zero");
        c.init_file = s.value("init_file", "");
        c.binit_file = s.value("binit_file", "");
        c.snap_stride = s.value("snap_stride", 0);
    }
    c.out = j.value("out", "");
    c.run_dir = j.value("run_dir", "");
    c.json_only = j.value("json_only", false);
    return c;
}

Json ExperimentConfig::echo() const {
    Json j;
    j["command"] = command;
    j["grid"] = Json{{"dim", grid.dim}, {"size", grid.size}, {"length", grid.length}};
    j["bm"] = Json{{"s", bm.s},
                   {"p", echo_real(bm.morrey.p)},
                   {"q", echo_real(bm.morrey.q)},
                   {"r", echo_real(bm.r)},
                   {"homogeneous", bm.homogeneous}};
    j["window"] = Json{{"stride", window.stride}, {"kmax", window.k_max}};
    j["seed"] = seed;
    j["trials"] = trials;
    if (!lemma.empty()) j["lemma"] = lemma;
    if (command == "verify" && lemma == "3.3") j["variant"] = variant;
    if (command == "euler" || command == "mhd" || command == "diagnose") {
        j["solver"] = Json{{"T", T},
                           {"dt", dt},
                           {"tol", tol},
                           {"max_iter", max_iter},
                           {"cfl", cfl_limit},
                           {"amplitude", amplitude},
                           {"scheme", scheme},
                           {"init", init},
                           {"binit", binit},
                           {"snap_stride", snap_stride}};
    }
    return j;
}

std::string ExperimentConfig::hash() const { return hex64(fnv1a64(echo().dump())); }

namespace {

struct TrialRowSet {
    std::vector<Json> rows;
    double max_ratio = 0.0;
    double min_positive_ratio = kInf;
    bool all_finite = true;

    void add(Json row, double ratio) {
        rows.push_back(std::move(row));
        if (!std::isfinite(ratio)) {
            all_finite = false;
            return;
        }
        max_ratio = std::max(max_ratio, ratio);
        if (ratio > 0.0) min_positive_ratio = std::min(min_positive_ratio, ratio);
    }
};

Json summary_json(const TrialRowSet& t) {
    Json s;
    s["max_ratio"] = json_number(t.max_ratio);
    s["min_positive_ratio"] = json_number(t.min_positive_ratio);
    s["two_sided_constant"] =
        json_number(std::max(t.max_ratio, t.min_positive_ratio > 0.0 && std::isfinite(t.min_positive_ratio)
                                              ? 1.0 / t.min_positive_ratio
                                              : 0.0));
    s["all_finite"] = t.all_finite;
    return s;
}

RealField scalar_trial_field(const ExperimentConfig& cfg, std::uint64_t stream, int trial) {
    return random_band_limited(cfg.grid, split_seed(cfg.seed, stream + 17 * trial), 2.0, 1.0);
}

VectorField vector_trial_field(const ExperimentConfig& cfg, std::uint64_t stream, int trial) {
    return random_divergence_free(cfg.grid, split_seed(cfg.seed, stream + 31 * trial), 2.0, 1.0);
}

// --- verify handlers -------------------------------------------------------

Json verify_bernstein(const ExperimentConfig& cfg) {
    TrialRowSet rows;
    struct Item {
        std::vector<Json> rows;
        std::vector<double> ratios;
    };
    std::vector<Item> items(static_cast<std::size_t>(cfg.trials));
    parallel_for(items.size(), [&](std::size_t t) {
        RealField f = scalar_trial_field(cfg, 100, static_cast<int>(t));
        double fnorm = morrey_norm(f, cfg.bm.morrey, cfg.window);
        DyadicDecomposition dec = decompose(f, true);
        for (int j = dec.j_min; j <= dec.j_max; ++j) {
            const RealField& b = dec.block(j);
            double bn = morrey_norm(b, cfg.bm.morrey, cfg.window);
            if (!(bn > 1e-12 * fnorm)) continue;  // block numerically empty
            double dn = morrey_norm(gradient(b), cfg.bm.morrey, cfg.window);
            double ratio = dn / (std::pow(2.0, j) * bn);
            items[t].rows.push_back(Json{{"trial", t}, {"j", j}, {"ratio", json_number(ratio)}});
            items[t].ratios.push_back(ratio);
        }
    });
    for (auto& it : items)
        for (std::size_t i = 0; i < it.rows.size(); ++i) rows.add(std::move(it.rows[i]), it.ratios[i]);
    Json out;
    out["rows"] = rows.rows;
    out["summary"] = summary_json(rows);
    return out;
}

Json verify_norm_lemma(const ExperimentConfig& cfg) {
    TrialRowSet rows;
    std::vector<std::pair<Json, double>> results(static_cast<std::size_t>(cfg.trials));
    parallel_for(results.size(), [&](std::size_t t) {
        EstimateReport rep;
        if (cfg.lemma == "2.3") {
            RealField f = scalar_trial_field(cfg, 200, static_cast<int>(t));
            rep = lemma23_report(f, cfg.bm, cfg.window);
        } else if (cfg.lemma == "2.5") {
            RealField f = scalar_trial_field(cfg, 300, static_cast<int>(t));
            RealField g = scalar_trial_field(cfg, 400, static_cast<int>(t));
            rep = lemma25_report(f, g, cfg.bm, cfg.window);
        } else {  // 3.2
            RealField f = scalar_trial_field(cfg, 500, static_cast<int>(t));
            rep = lemma32_report(f, cfg.bm, cfg.window);
        }
        rep.seed = split_seed(cfg.seed, t);
        Json row = rep.to_json();
        row["trial"] = t;
        results[t] = {std::move(row), rep.ratio};
    });
    for (auto& [row, ratio] : results) rows.add(std::move(row), ratio);
    Json out;
    out["rows"] = rows.rows;
    out["summary"] = summary_json(rows);
    return out;
}

Json verify_log_amplification(const ExperimentConfig& cfg) {
    TrialRowSet rows;
    const double lambdas[] = {1.0, 10.0, 1e3, 1e6};
    std::vector<std::vector<std::pair<Json, double>>> results(static_cast<std::size_t>(cfg.trials));
    parallel_for(results.size(), [&](std::size_t t) {
        RealField f = scalar_trial_field(cfg, 500, static_cast<int>(t));
        for (double lam : lambdas) {
            EstimateReport rep = lemma32_report(lam * f, cfg.bm, cfg.window);
            rep.seed = split_seed(cfg.seed, t);
            Json row = rep.to_json();
            row["trial"] = t;
            row["lambda"] = lam;
            results[t].emplace_back(std::move(row), rep.ratio);
        }
    });
    for (auto& rs : results)
        for (auto& [row, ratio] : rs) rows.add(std::move(row), ratio);
    Json out;
    out["rows"] = rows.rows;
    out["summary"] = summary_json(rows);
    return out;
}

Json verify_moser(const ExperimentConfig& cfg) {
    MoserVariant variant = cfg.variant == "inhom"   ? MoserVariant::inhomogeneous
                           : cfg.variant == "alpha" ? MoserVariant::split_regularity
                                                    : MoserVariant::homogeneous;
    TrialRowSet rows;
    std::vector<std::pair<Json, double>> results(static_cast<std::size_t>(cfg.trials));
    parallel_for(results.size(), [&](std::size_t t) {
        RealField f = scalar_trial_field(cfg, 600, static_cast<int>(t));
        RealField g = scalar_trial_field(cfg, 700, static_cast<int>(t));
        MoserSplit split = MoserSplit::solver_default(cfg.bm);
        EstimateReport rep = moser_report(f, g, cfg.bm, variant, split, cfg.window);
        rep.seed = split_seed(cfg.seed, t);
        Json row = rep.to_json();
        row["trial"] = t;
        results[t] = {std::move(row), rep.ratio};
    });
    for (auto& [row, ratio] : results) rows.add(std::move(row), ratio);
    Json out;
    out["rows"] = rows.rows;
    out["summary"] = summary_json(rows);
    return out;
}

Json verify_commutator(const ExperimentConfig& cfg) {
    TrialRowSet rows;
    std::vector<std::pair<Json, double>> results(static_cast<std::size_t>(cfg.trials));
    parallel_for(results.size(), [&](std::size_t t) {
        VectorField v = vector_trial_field(cfg, 800, static_cast<int>(t));
        RealField theta = scalar_trial_field(cfg, 900, static_cast<int>(t));
        CommutatorSplit split = CommutatorSplit::solver_default(cfg.bm);
        EstimateReport rep = cfg.lemma == "3.4"
                                 ? lemma34_report(v, theta, cfg.bm, split, cfg.window)
                                 : lemma35_report(v, theta, cfg.bm, split, cfg.window);
        rep.seed = split_seed(cfg.seed, t);
        Json row = rep.to_json();
        row["trial"] = t;
        results[t] = {std::move(row), rep.ratio};
    });
    for (auto& [row, ratio] : results) rows.add(std::move(row), ratio);
    Json out;
    out["rows"] = rows.rows;
    out["summary"] = summary_json(rows);
    return out;
}

Json verify_flowmap(const ExperimentConfig& cfg) {
    Json out;
    Json rows = Json::array();

    // Volume preservation along the steady cellular flow.
    VelocitySeries tg;
    tg.times = {0.0};
    tg.fields.push_back(dealias(leray_project(taylor_green(cfg.grid))));
    FlowMapOptions fopt;
    fopt.dt = cfg.dt;
    fopt.horizon = cfg.T;
    fopt.record_stride = 64;
    std::vector<std::array<double, 3>> coarse;
    {
        int step = std::max(1, cfg.grid.size / 16);
        const double h = cfg.grid.spacing();
        for (int i = 0; i < cfg.grid.size; i += step)
            for (int j = 0; j < cfg.grid.size; j += step)
                coarse.push_back({i * h, j * h, 0.0});
    }
    TrajectorySet ts = advect_trajectories(tg, coarse, fopt);
    double vol = volume_check(ts);
    rows.push_back(Json{{"check", "volume_taylor_green"}, {"value", json_number(vol)}});

    // Composition invariance under the shear map, random smooth samples.
    VelocitySeries sh;
    sh.times = {0.0};
    sh.fields.push_back(shear_flow(cfg.grid));
    FlowMapOptions copt;
    copt.dt = cfg.dt;
    copt.horizon = 0.5;
    copt.record_stride = 1 << 20;
    TrajectorySet full = advect_trajectories(sh, lattice_seeds(cfg.grid), copt);
    double worst = 0.0;
    for (int t = 0; t < std::max(1, std::min(cfg.trials, 5)); ++t) {
        RealField f = scalar_trial_field(cfg, 1000, t);
        double ratio = composition_norm_ratio(f, full, cfg.bm.morrey, cfg.window);
        rows.push_back(Json{{"check", "composition_shear"}, {"trial", t}, {"ratio", json_number(ratio)}});
        worst = std::max(worst, std::abs(ratio - 1.0));
    }

    out["rows"] = rows;
    out["summary"] = Json{{"volume_defect", json_number(vol)},
                          {"composition_worst_deviation", json_number(worst)},
                          {"all_finite", std::isfinite(vol) && std::isfinite(worst)}};
    return out;
}

// --- solver runs ------------------------------------------------------------

VectorField initial_field(const ExperimentConfig& cfg, const std::string& kind,
                          const std::string& file, std::uint64_t stream) {
    if (kind == "taylor-green") return dealias(leray_project(taylor_green(cfg.grid, cfg.amplitude)));
    if (kind == "shear") return dealias(shear_flow(cfg.grid, cfg.amplitude));
    if (kind == "random")
        return random_divergence_free(cfg.grid, split_seed(cfg.seed, stream), 2.0, cfg.amplitude);
    if (kind == "file") {
        if (file.empty()) fail_invalid("init=file needs init_file");
        return read_vector_field(file, cfg.grid.dim);
    }
    fail_invalid("unknown init '" + kind + "' (expected taylor-green|random|shear|file)");
}

Json run_summary(const DiagnosticsSeries& d) {
    auto minmax = [](const std::vector<double>& v) {
        double lo = kInf, hi = -kInf;
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        return std::pair{lo, hi};
    };
    auto [w_lo, w_hi] = minmax(d.sup_vorticity);
    Json s;
    s["sup_vorticity_initial"] = json_number(d.sup_vorticity.front());
    s["sup_vorticity_final"] = json_number(d.sup_vorticity.back());
    s["sup_vorticity_rel_drift"] =
        json_number(d.sup_vorticity.front() > 0.0 ? (w_hi - w_lo) / d.sup_vorticity.front() : 0.0);
    s["bkm_integral_final"] = json_number(d.bkm_integral.back());
    s["besov_morrey_v_final"] = json_number(d.besov_morrey_v.back());
    bool finite = true;
    for (double x : d.sup_vorticity) finite = finite && std::isfinite(x);
    for (double x : d.besov_morrey_v) finite = finite && std::isfinite(x);
    s["all_finite"] = finite;
    return s;
}

ExperimentResult run_solver(const ExperimentConfig& cfg) {
    ExperimentResult res;
    const bool mhd = cfg.command == "mhd";
    fs::path dir = cfg.out.empty() ? fs::path("run") : fs::path(cfg.out);
    fs::create_directories(dir / "snapshots");

    VectorField v0 = initial_field(cfg, cfg.init, cfg.init_file, 1);
    std::optional<VectorField> b0;
    if (mhd) {
        if (cfg.binit == "zero")
            b0 = VectorField(cfg.grid);
        else if (cfg.binit == "vinit")
            b0 = v0;
        else
            b0 = initial_field(cfg, cfg.binit, cfg.binit_file, 2);
    }

    MhdSeries series;
    Json iteration_json;
    if (cfg.scheme == "direct") {
        FlowState init{0.0, v0, b0};
        series = run_direct(init, cfg.T, cfg.dt, cfg.cfl_limit);
    } else if (cfg.scheme == "iterate") {
        IterateOptions opt;
        opt.bp = cfg.bm;
        opt.window = cfg.window;
        opt.T = cfg.T;
        opt.dt = cfg.dt;
        opt.tol = cfg.tol;
        opt.max_iter = cfg.max_iter;
        opt.cfl_limit = cfg.cfl_limit;
        if (mhd) {
            auto [s, rep] = mhd_iterate(v0, *b0, opt);
            series = std::move(s);
            iteration_json = rep.to_json();
        } else {
            auto [s, rep] = euler_iterate(v0, opt);
            series.v = std::move(s);
            iteration_json = rep.to_json();
        }
    } else {
        fail_invalid("unknown scheme '" + cfg.scheme + "' (expected direct|iterate)");
    }

    DiagnosticsSeries diag = blowup_diagnostics(series, cfg.bm, cfg.window);
    write_diagnostics_csv(diag, dir / "diagnostics.csv");

    const long long steps = static_cast<long long>(series.v.fields.size()) - 1;
    int stride = cfg.snap_stride > 0 ? cfg.snap_stride
                                     : static_cast<int>(std::max<long long>(1, steps / 16));
    Json snapshots = Json::array();
    for (std::size_t i = 0; i < series.v.fields.size();
         i += static_cast<std::size_t>(stride)) {
        char name[64];
        std::snprintf(name, sizeof name, "t%06zu", i);
        fs::path stem = dir / "snapshots" / name;
        write_vector_field(series.v.fields[i], (stem.string() + ".v"));
        Json entry{{"index", i}, {"t", series.v.times[i]}, {"v", std::string("snapshots/") + name + ".v"}};
        if (series.has_b()) {
            write_vector_field(series.b.fields[i], (stem.string() + ".b"));
            entry["b"] = std::string("snapshots/") + name + ".b";
        }
        snapshots.push_back(entry);
    }

    Json manifest;
    manifest["config"] = cfg.echo();
    manifest["config_hash"] = cfg.hash();
    manifest["snapshots"] = snapshots;
    write_json(manifest, dir / "manifest.json");
    if (!iteration_json.is_null()) write_json(iteration_json, dir / "iteration_report.json");

    Json report;
    report["command"] = cfg.command;
    report["config"] = cfg.echo();
    report["config_hash"] = cfg.hash();
    report["summary"] = run_summary(diag);
    if (!iteration_json.is_null()) report["iteration"] = iteration_json;
    write_json(report, dir / "report.json");

    res.report = report;
    res.report_path = (dir / "report.json").string();
    bool finite = report["summary"]["all_finite"].get<bool>();
    res.exit_code = finite ? 0 : 2;
    res.message = finite ? "run complete" : "run produced non-finite diagnostics";
    return res;
}

ExperimentResult run_norms(const ExperimentConfig& cfg) {
    ExperimentResult res;
    Json report;
    report["command"] = "norms";
    report["config"] = cfg.echo();
    report["config_hash"] = cfg.hash();

    Json results;
    if (cfg.init == "taylor-green" || cfg.init == "shear" || cfg.init == "random-divfree") {
        VectorField v = cfg.init == "taylor-green" ? taylor_green(cfg.grid, cfg.amplitude)
                        : cfg.init == "shear"
                            ? shear_flow(cfg.grid, cfg.amplitude)
                            : random_divergence_free(cfg.grid, split_seed(cfg.seed, 1), 2.0,
                                                     cfg.amplitude);
        results["morrey"] = json_number(morrey_norm(v, cfg.bm.morrey, cfg.window));
        results["besov_morrey"] = json_number(besov_morrey_norm(v, cfg.bm, cfg.window));
        results["besov_infinity"] =
            json_number(besov_infinity_norm(v, cfg.bm.s, cfg.bm.r, cfg.bm.homogeneous));
        results["sup"] = json_number(sup_norm(v));
        results["l2"] = json_number(l2_norm(v));
    } else {
        RealField f;
        if (cfg.init == "file") {
            if (cfg.init_file.empty()) fail_invalid("init=file needs init_file");
            f = read_field(cfg.init_file);
        } else if (cfg.init == "random") {
            f = random_band_limited(cfg.grid, split_seed(cfg.seed, 1), 2.0, cfg.amplitude);
        } else if (cfg.init == "bump") {
            f = bump_product(cfg.grid, split_seed(cfg.seed, 1));
        } else {
            fail_invalid("unknown norms init '" + cfg.init + "'");
        }
        results["morrey"] = json_number(morrey_norm(f, cfg.bm.morrey, cfg.window));
        results["besov_morrey"] = json_number(besov_morrey_norm(f, cfg.bm, cfg.window));
        results["besov_infinity"] =
            json_number(besov_infinity_norm(f, cfg.bm.s, cfg.bm.r, cfg.bm.homogeneous));
        results["sup"] = json_number(sup_norm(f));
        results["l2"] = json_number(l2_norm(f));
    }
    report["results"] = results;

    if (!cfg.out.empty()) {
        fs::path p(cfg.out);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        write_json(report, p);
        res.report_path = cfg.out;
    }
    res.report = report;
    res.message = "norms computed";
    return res;
}

ExperimentResult run_verify(const ExperimentConfig& cfg) {
    static const std::vector<std::string> known = {"2.1", "2.3", "2.5", "3.1",
                                                   "3.2", "3.3", "3.4", "3.5"};
    if (std::find(known.begin(), known.end(), cfg.lemma) == known.end()) {
        std::string ids;
        for (const auto& k : known) ids += (ids.empty() ? "" : ", ") + k;
        fail_invalid("unknown lemma id '" + cfg.lemma + "'; known ids: " + ids);
    }

    Json body;
    if (cfg.lemma == "2.1")
        body = verify_bernstein(cfg);
    else if (cfg.lemma == "2.3" || cfg.lemma == "2.5")
        body = verify_norm_lemma(cfg);
    else if (cfg.lemma == "3.1")
        body = verify_flowmap(cfg);
    else if (cfg.lemma == "3.2")
        body = verify_log_amplification(cfg);
    else if (cfg.lemma == "3.3")
        body = verify_moser(cfg);
    else
        body = verify_commutator(cfg);

    Json report;
    report["command"] = "verify";
    report["lemma"] = cfg.lemma;
    report["config"] = cfg.echo();
    report["config_hash"] = cfg.hash();
    report["rows"] = body["rows"];
    report["summary"] = body["summary"];

    ExperimentResult res;
    res.report = report;
    if (!cfg.out.empty()) {
        fs::path p(cfg.out);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        write_json(report, p);
        res.report_path = cfg.out;
    }
    bool finite = report["summary"]["all_finite"].get<bool>();
    res.exit_code = finite ? 0 : 2;
    res.message = finite ? "verification sweep complete" : "non-finite ratios encountered";
    return res;
}

ExperimentResult run_corpus(const ExperimentConfig& cfg) {
    fs::path dir = cfg.out.empty() ? fs::path("corpus") : fs::path(cfg.out);
    fs::create_directories(dir);
    static const std::vector<std::string> kinds = {"random", "single-mode", "taylor-green", "shear",
                                                   "bump-product", "random-divfree"};
    Json entries = Json::array();
    for (int t = 0; t < cfg.trials; ++t) {
        const std::string& kind = kinds[static_cast<std::size_t>(t) % kinds.size()];
        std::uint64_t s = split_seed(cfg.seed, static_cast<std::uint64_t>(t));
        char label[64];
        std::snprintf(label, sizeof label, "entry_%03d_%s", t, kind.c_str());
        Json entry{{"label", label}, {"kind", kind}, {"seed", s}};
        if (kind == "taylor-green" || kind == "shear" || kind == "random-divfree") {
            VectorField v = kind == "taylor-green" ? taylor_green(cfg.grid)
                            : kind == "shear"      ? shear_flow(cfg.grid)
                                                   : random_divergence_free(cfg.grid, s, 2.0, 1.0);
            write_vector_field(dealias(v), dir / label);
            entry["files"] = Json::array({std::string(label) + ".c0.json", std::string(label) + ".c1.json"});
        } else {
            RealField f = kind == "random" ? random_band_limited(cfg.grid, s, 2.0, 1.0)
                          : kind == "bump-product"
                              ? bump_product(cfg.grid, s)
                              : single_mode(cfg.grid,
                                            {1 + static_cast<int>(s % static_cast<std::uint64_t>(
                                                                          std::max(1, cfg.grid.size / 3 - 1))),
                                             0, 0},
                                            1.0, 0.0);
            write_field(dealias(f), dir / (std::string(label) + ".json"));
            entry["files"] = Json::array({std::string(label) + ".json"});
        }
        entries.push_back(entry);
    }
    Json manifest;
    manifest["config"] = cfg.echo();
    manifest["config_hash"] = cfg.hash();
    manifest["entries"] = entries;
    write_json(manifest, dir / "manifest.json");

    ExperimentResult res;
    res.report = manifest;
    res.report_path = (dir / "manifest.json").string();
    res.message = "corpus written";
    return res;
}

ExperimentResult run_diagnose(const ExperimentConfig& cfg) {
    fs::path dir(cfg.run_dir.empty() ? cfg.out : cfg.run_dir);
    if (dir.empty()) fail_invalid("diagnose needs a run directory");
    Json manifest = read_json(dir / "manifest.json");
    ExperimentConfig run_cfg = ExperimentConfig::from_json(manifest.at("config"));
    std::string stored_hash = manifest.at("config_hash").get<std::string>();
    if (run_cfg.hash() != stored_hash)
        fail_invalid("diagnose: run directory config hash mismatch (stored " + stored_hash +
                     ", recomputed " + run_cfg.hash() + ")");

    DiagnosticsSeries stored = read_diagnostics_csv(dir / "diagnostics.csv");

    MhdSeries series;
    for (const auto& snap : manifest.at("snapshots")) {
        series.v.times.push_back(snap.at("t").get<double>());
        series.v.fields.push_back(
            read_vector_field(dir / snap.at("v").get<std::string>(), run_cfg.grid.dim));
        if (snap.contains("b")) {
            series.b.times.push_back(snap.at("t").get<double>());
            series.b.fields.push_back(
                read_vector_field(dir / snap.at("b").get<std::string>(), run_cfg.grid.dim));
        }
    }
    DiagnosticsSeries recomputed = blowup_diagnostics(series, run_cfg.bm, run_cfg.window);

    // Compare the pointwise functionals at snapshot times (the integral needs
    // the full series, so it is not re-checked here).
    double worst = 0.0;
    for (std::size_t i = 0; i < recomputed.times.size(); ++i) {
        auto stored_at = [&](const std::vector<double>& col, double t) {
            for (std::size_t k = 0; k < stored.times.size(); ++k)
                if (std::abs(stored.times[k] - t) <= 1e-12) return col[k];
            fail_invalid("diagnose: snapshot time missing from diagnostics.csv");
        };
        double t = recomputed.times[i];
        auto rel = [](double a, double b) {
            double scale = std::max(std::abs(a), std::abs(b));
            return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
        };
        worst = std::max(worst, rel(recomputed.sup_vorticity[i], stored_at(stored.sup_vorticity, t)));
        worst = std::max(worst, rel(recomputed.b0_inf_inf[i], stored_at(stored.b0_inf_inf, t)));
        worst = std::max(worst, rel(recomputed.b0_inf_1[i], stored_at(stored.b0_inf_1, t)));
        worst = std::max(worst, rel(recomputed.besov_morrey_v[i], stored_at(stored.besov_morrey_v, t)));
    }

    Json report;
    report["command"] = "diagnose";
    report["config"] = run_cfg.echo();
    report["config_hash"] = stored_hash;
    report["summary"] = Json{{"snapshots", recomputed.times.size()},
                             {"max_relative_deviation", json_number(worst)},
                             {"pass", worst <= 1e-11}};
    write_json(report, dir / "diagnose_report.json");

    ExperimentResult res;
    res.report = report;
    res.report_path = (dir / "diagnose_report.json").string();
    res.exit_code = worst <= 1e-11 ? 0 : 2;
    res.message = res.exit_code == 0 ? "diagnostics reproduce stored values"
                                     : "stored diagnostics deviate from recomputation";
    return res;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    try {
        cfg.bm.validate();
        cfg.window.validate(cfg.grid);
        if (cfg.command == "norms") return run_norms(cfg);
        if (cfg.command == "verify") return run_verify(cfg);
        if (cfg.command == "euler" || cfg.command == "mhd") return run_solver(cfg);
        if (cfg.command == "corpus") return run_corpus(cfg);
        if (cfg.command == "diagnose") return run_diagnose(cfg);
        fail_invalid("unknown command '" + cfg.command + "'");
    } catch (const Error& e) {
        ExperimentResult res;
        res.exit_code = e.code() == ErrorCode::assertion ? 2 : 1;
        res.message = e.what();
        return res;
    } catch (const std::exception& e) {
        ExperimentResult res;
        res.exit_code = 1;
        res.message = e.what();
        return res;
    }
}

ExperimentResult run_experiment_json(const std::string& config_json) {
    ExperimentConfig cfg;
    try {
        cfg = ExperimentConfig::from_json(Json::parse(config_json));
    } catch (const std::exception& e) {
        ExperimentResult res;
        res.exit_code = 1;
        res.message = std::string("invalid config: ") + e.what();
        return res;
    }
    return run_experiment(cfg);
}

}  // namespace bmtk
