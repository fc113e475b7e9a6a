#include "morrey.hpp"

#include <cmath>

namespace bmtk {

void MorreyParams::validate() const {
    if (!(p >= 1.0) || !(q >= 1.0) || !(q <= p))
        fail_invalid("Morrey parameters require 1 <= q <= p (p=" + std::to_string(p) +
                     ", q=" + std::to_string(q) + ")");
}

int WindowSet::resolved_kmax(const Grid& g) const {
    int full = static_cast<int>(std::lround(std::log2(static_cast<double>(g.size))));
    if (k_max <= 0) return full;
    return std::min(k_max, full);
}

void WindowSet::validate(const Grid& g) const {
    if (stride < 1 || g.size % stride != 0) fail_invalid("window stride must divide the grid size");
    if (k_max < 0) fail_invalid("window k_max must be >= 0");
}

namespace {

// Summed-area table over the torus, extended by the largest window extent so
// wrapped windows become contiguous ranges.  Long-double accumulation keeps
// the table differencing at roundoff against direct summation.
class IntegralImage {
  public:
    IntegralImage(const RealField& g_abs_q, int extent) : dim_(g_abs_q.grid().dim), n_(g_abs_q.grid().size) {
        ext_ = n_ + extent;
        if (dim_ == 2) {
            table_.assign(static_cast<std::size_t>(ext_ + 1) * (ext_ + 1), 0.0L);
            const auto& s = g_abs_q.samples();
            for (int i = 0; i < ext_; ++i) {
                const int si = (i % n_) * n_;
                for (int j = 0; j < ext_; ++j) {
                    long double v = s[static_cast<std::size_t>(si + (j % n_))];
                    at(i + 1, j + 1) = at(i, j + 1) + at(i + 1, j) - at(i, j) + v;
                }
            }
        } else {
            table_.assign(static_cast<std::size_t>(ext_ + 1) * (ext_ + 1) * (ext_ + 1), 0.0L);
            const auto& s = g_abs_q.samples();
            for (int i = 0; i < ext_; ++i)
                for (int j = 0; j < ext_; ++j)
                    for (int k = 0; k < ext_; ++k) {
                        long double v = s[(static_cast<std::size_t>(i % n_) * n_ + (j % n_)) * n_ + (k % n_)];
                        at3(i + 1, j + 1, k + 1) = v + at3(i, j + 1, k + 1) + at3(i + 1, j, k + 1) +
                                                   at3(i + 1, j + 1, k) - at3(i, j, k + 1) - at3(i, j + 1, k) -
                                                   at3(i + 1, j, k) + at3(i, j, k);
                    }
        }
    }

    /// Sum over the box [a, a+m) per axis, a in [0, n).
    long double box_sum2(int a0, int a1, int m) const {
        return at(a0 + m, a1 + m) - at(a0, a1 + m) - at(a0 + m, a1) + at(a0, a1);
    }
    long double box_sum3(int a0, int a1, int a2, int m) const {
        auto S = [&](int i, int j, int k) { return at3(i, j, k); };
        return S(a0 + m, a1 + m, a2 + m) - S(a0, a1 + m, a2 + m) - S(a0 + m, a1, a2 + m) -
               S(a0 + m, a1 + m, a2) + S(a0, a1, a2 + m) + S(a0, a1 + m, a2) + S(a0 + m, a1, a2) -
               S(a0, a1, a2);
    }

  private:
    long double& at(int i, int j) { return table_[static_cast<std::size_t>(i) * (ext_ + 1) + j]; }
    long double at(int i, int j) const { return table_[static_cast<std::size_t>(i) * (ext_ + 1) + j]; }
    long double& at3(int i, int j, int k) {
        return table_[(static_cast<std::size_t>(i) * (ext_ + 1) + j) * (ext_ + 1) + k];
    }
    long double at3(int i, int j, int k) const {
        return table_[(static_cast<std::size_t>(i) * (ext_ + 1) + j) * (ext_ + 1) + k];
    }

    int dim_, n_, ext_;
    std::vector<long double> table_;
};

RealField abs_power(const RealField& f, double q) {
    RealField g(f.grid());
    if (q == 2.0) {
        for (std::size_t i = 0; i < f.size(); ++i) g[i] = f[i] * f[i];
    } else if (q == 1.0) {
        for (std::size_t i = 0; i < f.size(); ++i) g[i] = std::abs(f[i]);
    } else {
        for (std::size_t i = 0; i < f.size(); ++i) g[i] = std::pow(std::abs(f[i]), q);
    }
    return g;
}

double morrey_of_abs_q(const RealField& g_abs_q, const Grid& grid, const MorreyParams& mp,
                       const WindowSet& ws) {
    const int n = grid.size;
    const int dim = grid.dim;
    const double h = grid.spacing();
    const int kmax = ws.resolved_kmax(grid);

    // Window extents m_k = min(2 R_k + 1, n), R_k = n 2^{-k} samples.
    std::vector<int> half_widths, extents;
    for (int k = 1; k <= kmax; ++k) {
        int R = n >> k;
        if (R < 1) break;
        half_widths.push_back(R);
        extents.push_back(std::min(2 * R + 1, n));
    }
    int max_extent = extents.empty() ? 1 : extents.front();

    IntegralImage table(g_abs_q, max_extent);
    const double hd = std::pow(h, dim);

    long double best = 0.0L;
    for (std::size_t wi = 0; wi < half_widths.size(); ++wi) {
        const int R = half_widths[wi];
        const int m = extents[wi];
        const double r = R * h;
        const double scale = std::pow(r, dim / mp.p - dim / mp.q);
        long double max_sum = 0.0L;
        if (dim == 2) {
            for (int c0 = 0; c0 < n; c0 += ws.stride) {
                int a0 = (c0 - R + n) % n;
                for (int c1 = 0; c1 < n; c1 += ws.stride) {
                    int a1 = (c1 - R + n) % n;
                    long double s = table.box_sum2(a0, a1, m);
                    if (s > max_sum) max_sum = s;
                }
            }
        } else {
            for (int c0 = 0; c0 < n; c0 += ws.stride) {
                int a0 = (c0 - R + n) % n;
                for (int c1 = 0; c1 < n; c1 += ws.stride) {
                    int a1 = (c1 - R + n) % n;
                    for (int c2 = 0; c2 < n; c2 += ws.stride) {
                        int a2 = (c2 - R + n) % n;
                        long double s = table.box_sum3(a0, a1, a2, m);
                        if (s > max_sum) max_sum = s;
                    }
                }
            }
        }
        long double value = scale * std::pow(static_cast<double>(max_sum) * hd, 1.0 / mp.q);
        if (value > best) best = value;
    }
    return static_cast<double>(best);
}

}  // namespace

double morrey_norm(const RealField& f, const MorreyParams& mp, const WindowSet& ws) {
    mp.validate();
    ws.validate(f.grid());
    if (std::isinf(mp.q)) return sup_norm(f);  // M^inf_inf degenerates to L^inf
    RealField g = abs_power(f, mp.q);
    return morrey_of_abs_q(g, f.grid(), mp, ws);
}

double morrey_norm(const VectorField& v, const MorreyParams& mp, const WindowSet& ws) {
    mp.validate();
    ws.validate(v.grid());
    if (std::isinf(mp.q)) return sup_norm(v);
    RealField g = abs_power(magnitude(v), mp.q);
    return morrey_of_abs_q(g, v.grid(), mp, ws);
}

}  // namespace bmtk
