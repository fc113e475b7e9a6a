#include "commutator.hpp"

#include <cmath>

#include "spectral_ops.hpp"

namespace bmtk {

namespace {

double recim(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

}  // namespace

RealField commutator_field(const VectorField& v, const RealField& theta, int j, bool homogeneous) {
    require_same_grid(v.grid(), theta.grid(), "commutator_field");
    require_divergence_free(v, "commutator_field: v");
    const Grid& g = v.grid();

    SpectralField Theta = to_spectral(theta);
    SpectralField block = dyadic_block(Theta, j, homogeneous);

    RealField out(g);
    for (int d = 0; d < g.dim; ++d) {
        RealField adv_block = multiply_exact(v[d], to_physical(spectral_derivative(block, d, 1)));
        RealField block_adv = to_physical(
            dyadic_block(to_spectral(multiply_exact(v[d], to_physical(spectral_derivative(Theta, d, 1)))),
                         j, homogeneous));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += adv_block[i] - block_adv[i];
    }
    return out;
}

double grad_sup_norm(const VectorField& v) {
    const Grid& g = v.grid();
    std::vector<RealField> parts;
    for (int i = 0; i < g.dim; ++i) {
        SpectralField Vi = to_spectral(v[i]);
        for (int d = 0; d < g.dim; ++d) parts.push_back(to_physical(spectral_derivative(Vi, d, 1)));
    }
    double m = 0.0;
    for (std::size_t p = 0; p < parts[0].size(); ++p) {
        double s = 0.0;
        for (const auto& part : parts) s += part[p] * part[p];
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

CommutatorSplit CommutatorSplit::solver_default(const BMParams& bp) {
    CommutatorSplit sp;
    sp.p1 = kInf;
    sp.q1 = bp.morrey.q;
    sp.p2 = bp.morrey.p;
    sp.q2 = bp.morrey.q;
    return sp;
}

void CommutatorSplit::validate(const BMParams& bp) const {
    if (!(q1 >= 1.0) || !(q1 <= p1)) fail_invalid("commutator split violates 1 <= q1 <= p1");
    if (std::abs(recim(bp.morrey.p) - (recim(p1) + recim(p2))) > 1e-9)
        fail_invalid("commutator split violates 1/p = 1/p1 + 1/p2");
    if (recim(bp.morrey.q) > recim(q1) + recim(q2) + 1e-9)
        fail_invalid("commutator split violates 1/q <= 1/q1 + 1/q2");
}

namespace {

Json split_json(const BMParams& bp, const CommutatorSplit& sp, const WindowSet& ws) {
    return Json{{"s", bp.s},
                {"p", json_number(bp.morrey.p)},
                {"q", json_number(bp.morrey.q)},
                {"r", json_number(bp.r)},
                {"p1", json_number(sp.p1)},
                {"q1", json_number(sp.q1)},
                {"p2", json_number(sp.p2)},
                {"q2", json_number(sp.q2)},
                {"stride", ws.stride},
                {"kmax", ws.k_max}};
}

/// Roundoff scale for the commutator LHS: |[v.grad, band_j] theta| is bounded
/// by sup|v| times the order-(s+1) norm of theta, so an LHS 1e-10 below that
/// is numerical zero and is reported as exact zero.
double commutator_roundoff_floor(const VectorField& v, const RealField& theta, const BMParams& bp,
                                 const WindowSet& ws) {
    BMParams shifted = bp;
    shifted.s = bp.s + 1.0;
    shifted.homogeneous = true;
    return 1e-10 * sup_norm(v) * besov_morrey_norm(theta, shifted, ws);
}

double commutator_lhs(const VectorField& v, const RealField& theta, const BMParams& bp,
                      const WindowSet& ws) {
    BlockRange range = block_range(v.grid(), true);
    std::vector<std::pair<int, double>> values(static_cast<std::size_t>(range.j_max - range.j_min + 1));
    parallel_for(values.size(), [&](std::size_t i) {
        int j = range.j_min + static_cast<int>(i);
        values[i] = {j, morrey_norm(commutator_field(v, theta, j, true), bp.morrey, ws)};
    });
    return lr_aggregate(values, bp.s, bp.r);
}

}  // namespace

EstimateReport lemma34_report(const VectorField& v, const RealField& theta, const BMParams& bp,
                              const CommutatorSplit& split, const WindowSet& ws) {
    bp.validate();
    if (!(bp.s > 0.0)) fail_invalid("commutator estimate 3.4 requires s > 0");
    if (std::isinf(bp.morrey.p)) fail_invalid("commutator estimate 3.4 requires p < inf");
    split.validate(bp);
    require_divergence_free(v, "lemma34_report: v");

    EstimateReport rep;
    rep.lemma = "3.4";
    rep.grid = v.grid();
    rep.params = split_json(bp, split, ws);

    rep.lhs = commutator_lhs(v, theta, bp, ws);
    if (rep.lhs <= commutator_roundoff_floor(v, theta, bp, ws)) rep.lhs = 0.0;

    BMParams hom = bp;
    hom.homogeneous = true;
    BMParams inhom_v{bp.s, {split.p2, split.q2}, bp.r, false};
    double t1 = grad_sup_norm(v) * besov_morrey_norm(theta, hom, ws);
    double t2 = morrey_norm(gradient(theta), MorreyParams{split.p1, split.q1}, ws) *
                besov_morrey_norm(v, inhom_v, ws);
    rep.rhs_terms = {{"gradv_theta", t1}, {"gradtheta_v", t2}};
    rep.ratio = safe_ratio(rep.lhs, rep.rhs_total());
    return rep;
}

EstimateReport lemma35_report(const VectorField& v, const RealField& theta, const BMParams& bp,
                              const CommutatorSplit& split, const WindowSet& ws) {
    bp.validate();
    if (!(bp.s > -1.0)) fail_invalid("commutator estimate 3.5 requires s > -1");
    if (std::isinf(bp.morrey.p)) fail_invalid("commutator estimate 3.5 requires p < inf");
    split.validate(bp);
    require_divergence_free(v, "lemma35_report: v");

    EstimateReport rep;
    rep.lemma = "3.5";
    rep.grid = v.grid();
    rep.params = split_json(bp, split, ws);
    rep.note = "velocity enters through the homogeneous order-(s+1) norm here; "
               "3.4 measures it in the inhomogeneous order-s norm";

    rep.lhs = commutator_lhs(v, theta, bp, ws);
    if (rep.lhs <= commutator_roundoff_floor(v, theta, bp, ws)) rep.lhs = 0.0;

    BMParams hom = bp;
    hom.homogeneous = true;
    BMParams hom_v{bp.s + 1.0, {split.p2, split.q2}, bp.r, true};
    double t1 = grad_sup_norm(v) * besov_morrey_norm(theta, hom, ws);
    double t2 = morrey_norm(theta, MorreyParams{split.p1, split.q1}, ws) *
                besov_morrey_norm(v, hom_v, ws);
    rep.rhs_terms = {{"gradv_theta", t1}, {"theta_v", t2}};
    rep.ratio = safe_ratio(rep.lhs, rep.rhs_total());
    return rep;
}

}  // namespace bmtk
