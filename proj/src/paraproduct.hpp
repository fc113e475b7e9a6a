#pragma once

#include "besov.hpp"

namespace bmtk {

/// T_f g + T_g f + R(f,g) reproduces the alias-free product exactly; the
/// zero modes of f and g pair inside the remainder.
struct BonySplit {
    RealField t_fg;
    RealField t_gf;
    RealField remainder;
    double residual = 0.0;  // reconstruction error relative to the product
};

/// T_f g = sum_j (low-frequency part of f below the j-band) * (band_j g),
/// all products zero-padded.
RealField paraproduct(const RealField& f, const RealField& g);

/// R(f,g) = sum over |j-j'| <= 1 of band_j f * band_j' g, plus mean(f)mean(g).
RealField remainder(const RealField& f, const RealField& g);

BonySplit bony_split(const RealField& f, const RealField& g);

enum class MoserVariant { homogeneous, inhomogeneous, split_regularity };

/// Hoelder-type parameter split for the product estimates.
struct MoserSplit {
    double p1 = kInf, q1 = kInf, p2 = 4.0, q2 = 2.0;
    double p3 = kInf, q3 = kInf, p4 = 4.0, q4 = 2.0;
    double r1 = kInf, r2 = 2.0, r3 = kInf, r4 = 2.0;
    double alpha = 0.5;

    static MoserSplit solver_default(const BMParams& bp);
    void validate(const BMParams& bp, MoserVariant variant) const;
};

EstimateReport moser_report(const RealField& f, const RealField& g, const BMParams& bp,
                            MoserVariant variant, const MoserSplit& split, const WindowSet& ws);

}  // namespace bmtk
