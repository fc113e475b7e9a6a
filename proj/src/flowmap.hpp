#pragma once

#include <filesystem>

#include "morrey.hpp"

namespace bmtk {

/// Velocity snapshots at uniformly spaced times; a single snapshot means a
/// steady driver valid for all t.
struct VelocitySeries {
    std::vector<double> times;
    std::vector<VectorField> fields;

    bool steady() const { return fields.size() == 1; }
    double spacing() const;
    void validate() const;
};

enum class Interp { bicubic, spectral };

struct FlowMapOptions {
    double dt = 1e-3;
    double horizon = 1.0;
    int record_stride = 1;       // record every k-th step (plus the endpoint)
    Interp interp = Interp::bicubic;
    double div_tol = 1e-10;
};

struct TrajectorySet {
    int dim = 2;
    double torus_length = kTwoPi;
    std::vector<std::array<double, 3>> seeds;
    std::vector<double> times;
    /// positions[t * seeds + s] wrapped to [0, L)^dim
    std::vector<std::array<double, 3>> positions;
    /// jacobian_dets[t * seeds + s], det of the seed-to-position Jacobian
    std::vector<double> jacobian_dets;

    std::size_t seed_count() const { return seeds.size(); }
    const std::array<double, 3>& position(std::size_t t, std::size_t s) const {
        return positions[t * seeds.size() + s];
    }
    double det(std::size_t t, std::size_t s) const { return jacobian_dets[t * seeds.size() + s]; }
};

/// Classical one-step 4th-order integration of dx/dt = v(x,t) together with
/// the variational system dJ/dt = (grad v)(x,t) J; velocity and its spectral
/// gradient are sampled by periodic cubic interpolation.
TrajectorySet advect_trajectories(const VelocitySeries& driver,
                                  const std::vector<std::array<double, 3>>& seeds,
                                  const FlowMapOptions& opt);

/// Seeds on every lattice point, row-major.
std::vector<std::array<double, 3>> lattice_seeds(const Grid& g);

/// max over seeds and recorded times of |det - 1|.
double volume_check(const TrajectorySet& ts);

/// morrey(f o X_T) / morrey(f); needs lattice seeds matching f's grid.
double composition_norm_ratio(const RealField& f, const TrajectorySet& ts, const MorreyParams& mp,
                              const WindowSet& ws);

void write_trajectories_csv(const TrajectorySet& ts, const std::filesystem::path& path);

/// Periodic cubic (Catmull-Rom) point sample of a gridded field.
double cubic_sample(const RealField& f, const std::array<double, 3>& x);
/// Exact trigonometric sample (slow verification path).
double spectral_sample(const SpectralField& F, const std::array<double, 3>& x);

}  // namespace bmtk
