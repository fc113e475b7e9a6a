#include "grid.hpp"

#include <cmath>

namespace bmtk {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(int dim_, int size_, double length_) : dim(dim_), size(size_), length(length_) {
    if (dim != 2 && dim != 3) fail_invalid("grid dim must be 2 or 3, got " + std::to_string(dim));
    if (size < 8 || !power_of_two(size))
        fail_invalid("grid size must be a power of two >= 8, got " + std::to_string(size));
    if (!(length > 0.0)) fail_invalid("grid length must be positive");
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (!(a == b)) fail_invalid(std::string(where) + ": grid mismatch");
}

RealField::RealField(const Grid& grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.point_count())
        fail_invalid("sample count does not match grid (" + std::to_string(samples_.size()) + " vs " +
                     std::to_string(grid_.point_count()) + ")");
}

void RealField::require_finite(const char* where) const {
    for (double v : samples_)
        if (!std::isfinite(v)) fail_invalid(std::string(where) + ": non-finite sample");
}

VectorField::VectorField(std::vector<RealField> comps) : comps_(std::move(comps)) {
    if (comps_.empty()) fail_invalid("vector field needs at least one component");
    const Grid& g = comps_[0].grid();
    if (static_cast<int>(comps_.size()) != g.dim)
        fail_invalid("vector field must have grid.dim components");
    for (auto& c : comps_) {
        require_same_grid(c.grid(), g, "VectorField");
        c.kind = FieldKind::vector_component;
    }
}

double sup_norm(const RealField& f) {
    double m = 0.0;
    for (double v : f.samples()) m = std::max(m, std::abs(v));
    return m;
}

double sup_norm(const VectorField& v) {
    double m = 0.0;
    for (std::size_t i = 0; i < v[0].size(); ++i) {
        double s = 0.0;
        for (int d = 0; d < v.dim(); ++d) s += v[d][i] * v[d][i];
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

double l2_norm(const RealField& f) {
    long double s = 0.0L;
    for (double v : f.samples()) s += static_cast<long double>(v) * v;
    double hd = std::pow(f.grid().spacing(), f.grid().dim);
    return std::sqrt(static_cast<double>(s) * hd);
}

double l2_norm(const VectorField& v) {
    long double s = 0.0L;
    for (int d = 0; d < v.dim(); ++d)
        for (double x : v[d].samples()) s += static_cast<long double>(x) * x;
    double hd = std::pow(v.grid().spacing(), v.grid().dim);
    return std::sqrt(static_cast<double>(s) * hd);
}

double l2_distance(const VectorField& a, const VectorField& b) { return l2_norm(a - b); }

RealField operator+(const RealField& a, const RealField& b) {
    require_same_grid(a.grid(), b.grid(), "operator+");
    RealField out(a.grid());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

RealField operator-(const RealField& a, const RealField& b) {
    require_same_grid(a.grid(), b.grid(), "operator-");
    RealField out(a.grid());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

RealField operator*(double c, const RealField& a) {
    RealField out(a.grid());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * a[i];
    return out;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    VectorField out(a.grid());
    for (int d = 0; d < a.dim(); ++d) out[d] = a[d] + b[d];
    return out;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
    VectorField out(a.grid());
    for (int d = 0; d < a.dim(); ++d) out[d] = a[d] - b[d];
    return out;
}

VectorField operator*(double c, const VectorField& a) {
    VectorField out(a.grid());
    for (int d = 0; d < a.dim(); ++d) out[d] = c * a[d];
    return out;
}

RealField magnitude(const VectorField& v) {
    RealField out(v.grid());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (int d = 0; d < v.dim(); ++d) s += v[d][i] * v[d][i];
        out[i] = std::sqrt(s);
    }
    return out;
}

}  // namespace bmtk
