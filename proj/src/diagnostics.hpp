#pragma once

#include <filesystem>

#include "solver.hpp"

namespace bmtk {

/// Blow-up monitor time series: vorticity sup norm, its block-space norms,
/// the running time integral of the sup norm, and the solution norm.
struct DiagnosticsSeries {
    std::vector<double> times;
    std::vector<double> sup_vorticity;
    std::vector<double> b0_inf_inf;      // vorticity, l^inf over blocks
    std::vector<double> b0_inf_1;        // vorticity, l^1 over blocks
    std::vector<double> bkm_integral;    // trapezoid of sup_vorticity
    std::vector<double> besov_morrey_v;  // solution, inhomogeneous order-s norm
    // magnetic counterparts; empty on pure Euler runs
    std::vector<double> sup_current;
    std::vector<double> jb0_inf_inf;
    std::vector<double> jb0_inf_1;
    std::vector<double> besov_morrey_b;

    bool has_b() const { return !sup_current.empty(); }
};

DiagnosticsSeries blowup_diagnostics(const MhdSeries& series, const BMParams& bp,
                                     const WindowSet& ws);

void write_diagnostics_csv(const DiagnosticsSeries& d, const std::filesystem::path& path);
DiagnosticsSeries read_diagnostics_csv(const std::filesystem::path& path);

}  // namespace bmtk
