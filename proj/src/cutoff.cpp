#include "cutoff.hpp"

#include <cmath>

#include "common.hpp"

namespace bmtk {

namespace {
double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
}  // namespace

double cutoff_chi(double t) {
    if (t < 0.0) fail_invalid("cutoff_chi: negative argument");
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    double a = bump(2.0 - t);
    double b = bump(t - 1.0);
    return a / (a + b);
}

double band_filter(double rho, int j) {
    return cutoff_chi(std::ldexp(rho, -j)) - cutoff_chi(std::ldexp(rho, 1 - j));
}

double lowpass_filter(double rho, int j) { return cutoff_chi(std::ldexp(rho, -j)); }

}  // namespace bmtk
