#pragma once

#include <filesystem>
#include <string>

#include "besov.hpp"
#include "solver.hpp"

namespace bmtk {

/// Fully parsed experiment description; the echo of this (minus output
/// locations) is what the config hash covers.
struct ExperimentConfig {
    std::string command;  // norms | verify | euler | mhd | diagnose | corpus
    Grid grid{2, 128, kTwoPi};
    BMParams bm{};
    WindowSet window{};
    std::uint64_t seed = 0;
    int trials = 20;

    std::string lemma;           // verify
    std::string variant = "hom"; // product-estimate variant for lemma 3.3

    // solver knobs
    double T = 1.0;
    double dt = 1e-3;
    double tol = 1e-8;
    int max_iter = 40;
    double cfl_limit = 0.5;
    double amplitude = 1.0;
    std::string scheme = "direct";      // direct | iterate
    std::string init = "taylor-green";  // taylor-green | random | shear | file
    std::string binit = "zero";        // zero | random | vinit | file
    std::string init_file, binit_file;
    int snap_stride = 0;  // 0: pick ~16 snapshots

    std::string out;      // report file (norms/verify) or run directory (euler/mhd/corpus)
    std::string run_dir;  // diagnose input
    bool json_only = false;

    static ExperimentConfig from_json(const Json& j);
    /// Canonical echo: every semantic knob, no output paths.
    Json echo() const;
    std::string hash() const;
};

struct ExperimentResult {
    int exit_code = 0;          // 0 pass, 1 error, 2 assertion failure
    std::string message;
    std::string report_path;
    Json report;
};

/// Dispatches one experiment; writes artifacts under cfg.out.  Errors are
/// reported through the exit code and message, not exceptions.
ExperimentResult run_experiment(const ExperimentConfig& cfg);
ExperimentResult run_experiment_json(const std::string& config_json);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace bmtk
