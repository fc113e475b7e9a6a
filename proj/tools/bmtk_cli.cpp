// Command-line front end; all numerics go through the shared-library C API.
#include <bmtk.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <string>

namespace {

using Json = nlohmann::ordered_json;

Json real_flag(const std::string& v) {
    if (v == "inf" || v == "Inf" || v == "INF") return "inf";
    return std::stod(v);
}

struct CommonFlags {
    int N = 128;
    int dim = 2;
    double length = 6.283185307179586476925286766559;
    double s = 2.5;
    std::string p = "4", q = "2", r = "2";
    bool homogeneous = false;
    int stride = 1;
    int kmax = 0;
    std::uint64_t seed = 0;
    int trials = 20;
    std::string out;
    bool json_only = false;

    void attach(CLI::App* cmd, bool with_trials = true) {
        cmd->add_option("--N,--grid", N, "samples per axis (power of two)");
        cmd->add_option("--dim", dim, "spatial dimension (2 or 3)");
        cmd->add_option("--length", length, "torus period");
        cmd->add_option("--s", s, "regularity index");
        cmd->add_option("--p", p, "Morrey integrability p (number or inf)");
        cmd->add_option("--q", q, "Morrey local exponent q (number or inf)");
        cmd->add_option("--r", r, "block summability r (number or inf)");
        cmd->add_flag("--homogeneous", homogeneous, "use the homogeneous norm");
        cmd->add_option("--stride", stride, "window center stride");
        cmd->add_option("--kmax", kmax, "dyadic window depth (0 = full)");
        cmd->add_option("--seed", seed, "master seed");
        if (with_trials) cmd->add_option("--trials", trials, "number of corpus trials");
        cmd->add_option("--out", out, "output file or directory");
        cmd->add_flag("--json-only", json_only, "emit the raw report only");
    }

    Json config(const std::string& command) const {
        Json j;
        j["command"] = command;
        j["grid"] = Json{{"dim", dim}, {"size", N}, {"length", length}};
        j["bm"] = Json{{"s", s},
                       {"p", real_flag(p)},
                       {"q", real_flag(q)},
                       {"r", real_flag(r)},
                       {"homogeneous", homogeneous}};
        j["window"] = Json{{"stride", stride}, {"kmax", kmax}};
        j["seed"] = seed;
        j["trials"] = trials;
        j["out"] = out;
        j["json_only"] = json_only;
        return j;
    }
};

int dispatch(const Json& config, bool json_only) {
    int exit_code = 0;
    char* report = nullptr;
    bmtk_status st = bmtk_run_experiment(config.dump().c_str(), &exit_code, &report);
    if (st != BMTK_OK) {
        std::fprintf(stderr, "error: %s\n", bmtk_last_error());
        if (report) bmtk_string_free(report);
        return 1;
    }
    if (exit_code != 0) std::fprintf(stderr, "%s\n", bmtk_last_error());
    if (report) {
        if (json_only) {
            std::fputs(report, stdout);
            std::fputc('\n', stdout);
        } else {
            Json doc = Json::parse(std::string(report), nullptr, false);
            if (!doc.is_discarded() && doc.contains("summary"))
                std::cout << "summary: " << doc["summary"].dump() << "\n";
            else if (!doc.is_discarded() && doc.contains("results"))
                std::cout << "results: " << doc["results"].dump() << "\n";
            if (exit_code == 0) std::cout << "ok\n";
        }
        bmtk_string_free(report);
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic Besov-Morrey analysis toolkit"};
    app.require_subcommand(1);

    CommonFlags norms_flags, verify_flags, euler_flags, mhd_flags, corpus_flags;
    std::string norms_init = "random", norms_field;
    std::string lemma, variant = "hom";
    std::string euler_init = "taylor-green", euler_scheme = "direct", euler_init_file;
    std::string mhd_init = "random", mhd_scheme = "direct", mhd_init_file;
    std::string mhd_binit = "random", mhd_binit_file;
    double T = 1.0, dt = 1e-3, tol = 1e-8, amplitude = 1.0, cfl = 0.5;
    int max_iter = 40, snap_stride = 0;
    std::string diagnose_dir;

    auto* norms = app.add_subcommand("norms", "evaluate norms of a field");
    norms_flags.attach(norms, false);
    norms->add_option("--init", norms_init, "field source: random|bump|taylor-green|shear|random-divfree|file");
    norms->add_option("--field", norms_field, "field file (with --init file)");
    norms->add_option("--amplitude", amplitude, "field amplitude");

    auto* verify = app.add_subcommand("verify", "run a lemma verification sweep");
    verify_flags.attach(verify);
    verify->add_option("--lemma", lemma, "lemma id: 2.1|2.3|2.5|3.1|3.2|3.3|3.4|3.5")->required();
    verify->add_option("--variant", variant, "product-estimate variant: hom|inhom|alpha");
    verify->add_option("--T", T, "flow-map horizon (lemma 3.1)");
    verify->add_option("--dt", dt, "flow-map step (lemma 3.1)");

    auto* euler = app.add_subcommand("euler", "incompressible flow runs");
    auto* euler_run = euler->add_subcommand("run", "run the 2D solver");
    euler_flags.attach(euler_run, false);
    euler_run->add_option("--init", euler_init, "initial data: taylor-green|random|shear|file");
    euler_run->add_option("--init-file", euler_init_file, "field stem (with --init file)");
    euler_run->add_option("--scheme", euler_scheme, "direct|iterate");
    euler_run->add_option("--T", T, "horizon");
    euler_run->add_option("--dt", dt, "time step");
    euler_run->add_option("--tol", tol, "iteration tolerance (relative)");
    euler_run->add_option("--max-iter", max_iter, "iteration cap");
    euler_run->add_option("--amplitude", amplitude, "initial amplitude");
    euler_run->add_option("--cfl", cfl, "CFL abort threshold");
    euler_run->add_option("--snap-stride", snap_stride, "snapshot subsampling stride");

    auto* mhd = app.add_subcommand("mhd", "ideal MHD runs");
    auto* mhd_run = mhd->add_subcommand("run", "run the 2D solver");
    mhd_flags.attach(mhd_run, false);
    mhd_run->add_option("--init", mhd_init, "initial velocity: taylor-green|random|shear|file");
    mhd_run->add_option("--init-file", mhd_init_file, "field stem (with --init file)");
    mhd_run->add_option("--binit", mhd_binit, "initial magnetic field: zero|vinit|random|file");
    mhd_run->add_option("--binit-file", mhd_binit_file, "field stem (with --binit file)");
    mhd_run->add_option("--scheme", mhd_scheme, "direct|iterate");
    mhd_run->add_option("--T", T, "horizon");
    mhd_run->add_option("--dt", dt, "time step");
    mhd_run->add_option("--tol", tol, "iteration tolerance (relative)");
    mhd_run->add_option("--max-iter", max_iter, "iteration cap");
    mhd_run->add_option("--amplitude", amplitude, "initial amplitude");
    mhd_run->add_option("--cfl", cfl, "CFL abort threshold");
    mhd_run->add_option("--snap-stride", snap_stride, "snapshot subsampling stride");

    auto* diagnose = app.add_subcommand("diagnose", "recompute diagnostics for a run directory");
    diagnose->add_option("--run", diagnose_dir, "run directory")->required();
    bool diagnose_json_only = false;
    diagnose->add_flag("--json-only", diagnose_json_only, "emit the raw report only");

    auto* corpus = app.add_subcommand("corpus", "generate a labeled field corpus");
    corpus_flags.attach(corpus);

    CLI11_PARSE(app, argc, argv);

    if (norms->parsed()) {
        Json cfg = norms_flags.config("norms");
        cfg["solver"] =
            Json{{"init", norms_init}, {"init_file", norms_field}, {"amplitude", amplitude}};
        return dispatch(cfg, norms_flags.json_only);
    }
    if (verify->parsed()) {
        Json cfg = verify_flags.config("verify");
        cfg["lemma"] = lemma;
        cfg["variant"] = variant;
        cfg["solver"] = Json{{"T", T}, {"dt", dt}};
        return dispatch(cfg, verify_flags.json_only);
    }
    if (euler->parsed() && euler_run->parsed()) {
        Json cfg = euler_flags.config("euler");
        cfg["solver"] = Json{{"T", T},
                             {"dt", dt},
                             {"tol", tol},
                             {"max_iter", max_iter},
                             {"cfl", cfl},
                             {"amplitude", amplitude},
                             {"scheme", euler_scheme},
                             {"init", euler_init},
                             {"init_file", euler_init_file},
                             {"snap_stride", snap_stride}};
        return dispatch(cfg, euler_flags.json_only);
    }
    if (mhd->parsed() && mhd_run->parsed()) {
        Json cfg = mhd_flags.config("mhd");
        cfg["solver"] = Json{{"T", T},
                             {"dt", dt},
                             {"tol", tol},
                             {"max_iter", max_iter},
                             {"cfl", cfl},
                             {"amplitude", amplitude},
                             {"scheme", mhd_scheme},
                             {"init", mhd_init},
                             {"init_file", mhd_init_file},
                             {"binit", mhd_binit},
                             {"binit_file", mhd_binit_file},
                             {"snap_stride", snap_stride}};
        return dispatch(cfg, mhd_flags.json_only);
    }
    if (diagnose->parsed()) {
        Json cfg;
        cfg["command"] = "diagnose";
        cfg["run_dir"] = diagnose_dir;
        return dispatch(cfg, diagnose_json_only);
    }
    if (corpus->parsed()) {
        return dispatch(corpus_flags.config("corpus"), corpus_flags.json_only);
    }
    std::fprintf(stderr, "no subcommand\n");
    return 1;
}
