#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "common.hpp"

namespace bmtk {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Uniform periodic lattice on [0,L)^dim, power-of-two samples per axis.
struct Grid {
    int dim = 2;
    int size = 0;
    double length = kTwoPi;

    Grid() = default;
    Grid(int dim_, int size_, double length_ = kTwoPi);

    std::size_t point_count() const {
        std::size_t n = 1;
        for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(size);
        return n;
    }
    double spacing() const { return length / size; }
    /// Frequency-lattice scale: physical wavenumber is wave_scale() * integer index.
    double wave_scale() const { return kTwoPi / length; }

    bool operator==(const Grid& o) const { return dim == o.dim && size == o.size && length == o.length; }
};

void require_same_grid(const Grid& a, const Grid& b, const char* where);

/// Signed integer frequency for FFT bin i on an axis of n samples.
inline int wavenumber(int i, int n) { return i < n / 2 ? i : i - n; }

using ComplexVec = std::vector<std::complex<double>, AlignedAllocator<std::complex<double>>>;

enum class FieldKind { scalar, vector_component };

/// Sampled periodic field, row-major.
class RealField {
  public:
    RealField() = default;
    explicit RealField(const Grid& grid, double fill = 0.0)
        : grid_(grid), samples_(grid.point_count(), fill) {}
    RealField(const Grid& grid, std::vector<double> samples);

    const Grid& grid() const { return grid_; }
    std::vector<double>& samples() { return samples_; }
    const std::vector<double>& samples() const { return samples_; }
    double* data() { return samples_.data(); }
    const double* data() const { return samples_.data(); }
    std::size_t size() const { return samples_.size(); }
    double operator[](std::size_t i) const { return samples_[i]; }
    double& operator[](std::size_t i) { return samples_[i]; }

    FieldKind kind = FieldKind::scalar;

    void require_finite(const char* where) const;

  private:
    Grid grid_;
    std::vector<double> samples_;
};

/// Full complex FFT-layout coefficients of a (usually real) field.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(const Grid& grid) : grid_(grid), coeff_(grid.point_count()) {}

    const Grid& grid() const { return grid_; }
    ComplexVec& coeff() { return coeff_; }
    const ComplexVec& coeff() const { return coeff_; }
    std::complex<double>& operator[](std::size_t i) { return coeff_[i]; }
    const std::complex<double>& operator[](std::size_t i) const { return coeff_[i]; }
    std::size_t size() const { return coeff_.size(); }

  private:
    Grid grid_;
    ComplexVec coeff_;
};

class VectorField {
  public:
    VectorField() = default;
    explicit VectorField(const Grid& grid) {
        for (int d = 0; d < grid.dim; ++d) comps_.emplace_back(grid);
        for (auto& c : comps_) c.kind = FieldKind::vector_component;
    }
    explicit VectorField(std::vector<RealField> comps);

    const Grid& grid() const { return comps_.at(0).grid(); }
    int dim() const { return static_cast<int>(comps_.size()); }
    RealField& operator[](int d) { return comps_[d]; }
    const RealField& operator[](int d) const { return comps_[d]; }

  private:
    std::vector<RealField> comps_;
};

/// Row-major index helpers (dim <= 3).
struct Indexer {
    int dim;
    int n;
    explicit Indexer(const Grid& g) : dim(g.dim), n(g.size) {}

    std::size_t flat(const std::array<int, 3>& idx) const {
        std::size_t f = 0;
        for (int d = 0; d < dim; ++d) f = f * n + static_cast<std::size_t>(idx[d]);
        return f;
    }
    std::array<int, 3> unflat(std::size_t f) const {
        std::array<int, 3> idx{0, 0, 0};
        for (int d = dim - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(f % n);
            f /= n;
        }
        return idx;
    }
};

/// Visits every mode: fn(flat_index, k) with k the signed integer wavevector.
template <typename Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
    const int n = g.size;
    std::array<int, 3> k{0, 0, 0};
    if (g.dim == 2) {
        std::size_t f = 0;
        for (int i0 = 0; i0 < n; ++i0) {
            k[0] = wavenumber(i0, n);
            for (int i1 = 0; i1 < n; ++i1, ++f) {
                k[1] = wavenumber(i1, n);
                fn(f, k);
            }
        }
    } else {
        std::size_t f = 0;
        for (int i0 = 0; i0 < n; ++i0) {
            k[0] = wavenumber(i0, n);
            for (int i1 = 0; i1 < n; ++i1) {
                k[1] = wavenumber(i1, n);
                for (int i2 = 0; i2 < n; ++i2, ++f) {
                    k[2] = wavenumber(i2, n);
                    fn(f, k);
                }
            }
        }
    }
}

/// Visits every sample: fn(flat_index, x) with x the physical coordinates.
template <typename Fn>
void for_each_point(const Grid& g, Fn&& fn) {
    const int n = g.size;
    const double h = g.spacing();
    std::array<double, 3> x{0, 0, 0};
    if (g.dim == 2) {
        std::size_t f = 0;
        for (int i0 = 0; i0 < n; ++i0) {
            x[0] = i0 * h;
            for (int i1 = 0; i1 < n; ++i1, ++f) {
                x[1] = i1 * h;
                fn(f, x);
            }
        }
    } else {
        std::size_t f = 0;
        for (int i0 = 0; i0 < n; ++i0) {
            x[0] = i0 * h;
            for (int i1 = 0; i1 < n; ++i1) {
                x[1] = i1 * h;
                for (int i2 = 0; i2 < n; ++i2, ++f) {
                    x[2] = i2 * h;
                    fn(f, x);
                }
            }
        }
    }
}

double sup_norm(const RealField& f);
double sup_norm(const VectorField& v);
/// Discrete L2 norm: sqrt(h^dim * sum f^2).
double l2_norm(const RealField& f);
double l2_norm(const VectorField& v);
double l2_distance(const VectorField& a, const VectorField& b);

RealField operator+(const RealField& a, const RealField& b);
RealField operator-(const RealField& a, const RealField& b);
RealField operator*(double c, const RealField& a);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double c, const VectorField& a);

/// Pointwise Euclidean magnitude of a vector field.
RealField magnitude(const VectorField& v);

}  // namespace bmtk
