#pragma once

#include <optional>

#include "besov.hpp"
#include "flowmap.hpp"

namespace bmtk {

/// Instantaneous solver state; b present means ideal MHD.
struct FlowState {
    double time = 0.0;
    VectorField v;
    std::optional<VectorField> b;

    void validate(double div_tol = 1e-10) const;
};

/// Paired series for coupled runs; b.fields empty on pure Euler runs.
struct MhdSeries {
    VelocitySeries v;
    VelocitySeries b;

    bool has_b() const { return !b.fields.empty(); }
};

/// One 4th-order step of the projected, 2/3-dealiased nonlinear system.
/// Aborts with a CFL error when |v|_max dt / h > cfl_limit.
FlowState direct_step(const FlowState& state, double dt, double cfl_limit = 0.5);

/// Nonlinear run storing every step.
MhdSeries run_direct(const FlowState& init, double T, double dt, double cfl_limit = 0.5);

/// Transport with frozen drift w and per-stage pressure recovery; solution
/// stays divergence-free.
VelocitySeries solve_linear_transport(const VelocitySeries& w, const VectorField& v0, double T,
                                      double dt, double cfl_limit = 0.5);

/// Coupled linear system with frozen drivers (w, a): both unknowns are
/// advected by w and stretched by a.
MhdSeries solve_linear_mhd(const VelocitySeries& w, const VelocitySeries& a, const VectorField& v0,
                           const VectorField& b0, double T, double dt, double cfl_limit = 0.5);

struct IterationReport {
    double horizon = 0.0;
    double tolerance = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> sup_norms;    // sup_t of the iterate's inhomogeneous norm
    std::vector<double> diff_norms;   // sup_t norm of iterate differences, order s-1
    std::vector<double> ratios;       // diff_norms[m] / diff_norms[m-1]

    Json to_json() const;
};

struct IterateOptions {
    BMParams bp;              // inhomogeneous order-s norm parameters
    WindowSet window;
    double T = 0.1;
    double dt = 1e-3;
    double tol = 1e-8;        // relative to the initial-data norm
    int max_iter = 40;
    double cfl_limit = 0.5;
};

/// Successive approximation: each iterate solves the linear transport system
/// driven by the previous one, with low-pass-truncated initial data.
std::pair<VelocitySeries, IterationReport> euler_iterate(const VectorField& v0,
                                                         const IterateOptions& opt);
std::pair<MhdSeries, IterationReport> mhd_iterate(const VectorField& v0, const VectorField& b0,
                                                  const IterateOptions& opt);

std::pair<VectorField, VectorField> elsasser(const VectorField& v, const VectorField& b);
std::pair<VectorField, VectorField> elsasser_inverse(const VectorField& zplus,
                                                     const VectorField& zminus);

/// Kinetic (+ magnetic) energy: |v|_L2^2 + |b|_L2^2.
double flow_energy(const FlowState& state);

}  // namespace bmtk
