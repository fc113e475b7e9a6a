#pragma once

#include "lp.hpp"
#include "morrey.hpp"
#include "report.hpp"

namespace bmtk {

/// (s, p, q, r, parity) for a Besov-Morrey norm.
struct BMParams {
    double s = 2.5;
    MorreyParams morrey{4.0, 2.0};
    double r = 2.0;
    bool homogeneous = false;

    void validate() const;
    /// Theorem-range check used by the solver entry points: s > 1 + n/p, or
    /// s = 1 + n/p with r = 1; also 1 < q <= p < inf.
    void validate_solver_range(int dim) const;
};

/// l^r over j of 2^{js} * per-block values.
double lr_aggregate(const std::vector<std::pair<int, double>>& block_values, double s, double r);

double besov_morrey_norm(const RealField& f, const BMParams& bp, const WindowSet& ws);
double besov_morrey_norm(const VectorField& v, const BMParams& bp, const WindowSet& ws);

/// l^r over j of 2^{js} * sup-norm of the block.
double besov_infinity_norm(const RealField& f, double s, double r, bool homogeneous);
double besov_infinity_norm(const VectorField& v, double s, double r, bool homogeneous);

enum class NormLemma { relation_23, embedding_24, algebra_25, logarithmic_32 };

EstimateReport lemma23_report(const RealField& f, const BMParams& bp, const WindowSet& ws);
EstimateReport lemma24_report(const RealField& f, const BMParams& bp, const WindowSet& ws);
EstimateReport lemma25_report(const RealField& f, const RealField& g, const BMParams& bp,
                              const WindowSet& ws);
EstimateReport lemma32_report(const RealField& f, const BMParams& bp, const WindowSet& ws);

}  // namespace bmtk
