#pragma once

#include "besov.hpp"

namespace bmtk {

/// [v.grad, band_j] theta = (v.grad)(band_j theta) - band_j((v.grad) theta),
/// products zero-padded.  Requires div v = 0.
RealField commutator_field(const VectorField& v, const RealField& theta, int j, bool homogeneous);

/// (p1,q1) for the gradient/low factor, (p2,q2) for the velocity factor;
/// must satisfy 1/p = 1/p1 + 1/p2 and 1/q <= 1/q1 + 1/q2.
struct CommutatorSplit {
    double p1 = kInf, q1 = 2.0;
    double p2 = 4.0, q2 = 2.0;

    static CommutatorSplit solver_default(const BMParams& bp);
    void validate(const BMParams& bp) const;
};

/// LHS: l^r over j of 2^{js} Morrey norms of the commutator blocks.
/// RHS: |grad v|_inf |theta|_{hom s} + |grad theta|_{M^{p1}_{q1}} |v|_{inhom s}.
EstimateReport lemma34_report(const VectorField& v, const RealField& theta, const BMParams& bp,
                              const CommutatorSplit& split, const WindowSet& ws);

/// RHS: |grad v|_inf |theta|_{hom s} + |theta|_{M^{p1}_{q1}} |v|_{hom s+1}.
EstimateReport lemma35_report(const VectorField& v, const RealField& theta, const BMParams& bp,
                              const CommutatorSplit& split, const WindowSet& ws);

/// Max over points of the Frobenius norm of grad v.
double grad_sup_norm(const VectorField& v);

}  // namespace bmtk
