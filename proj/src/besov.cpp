#include "besov.hpp"

#include <cmath>

#include "spectral_ops.hpp"

namespace bmtk {

Json json_number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

Json EstimateReport::to_json() const {
    Json j;
    j["lemma"] = lemma;
    j["lhs"] = json_number(lhs);
    Json terms = Json::object();
    for (const auto& [name, v] : rhs_terms) terms[name] = json_number(v);
    j["rhs_terms"] = terms;
    j["ratio"] = json_number(ratio);
    j["params"] = params;
    j["grid"] = Json{{"dim", grid.dim}, {"size", grid.size}, {"length", grid.length}};
    j["seed"] = seed;
    if (!note.empty()) j["note"] = note;
    return j;
}

double safe_ratio(double lhs, double rhs_total, double lhs_floor) {
    if (rhs_total > 0.0) return lhs / rhs_total;
    if (lhs <= lhs_floor) return 0.0;
    throw Error(ErrorCode::assertion, "estimate has zero right-hand side but nonzero left-hand side");
}

void BMParams::validate() const {
    morrey.validate();
    if (!(r >= 1.0)) fail_invalid("Besov-Morrey exponent r must satisfy r >= 1");
}

void BMParams::validate_solver_range(int dim) const {
    validate();
    if (!(morrey.q > 1.0) || std::isinf(morrey.p))
        fail_invalid("solver presets require 1 < q <= p < inf");
    const double critical = 1.0 + dim / morrey.p;
    const bool super = s > critical + 1e-12;
    const bool crit = std::abs(s - critical) <= 1e-12 && r == 1.0;
    if (!super && !crit)
        fail_invalid("solver presets require s > 1 + n/p, or s = 1 + n/p with r = 1 (s=" +
                     std::to_string(s) + ", critical=" + std::to_string(critical) + ")");
}

double lr_aggregate(const std::vector<std::pair<int, double>>& block_values, double s, double r) {
    if (std::isinf(r)) {
        double best = 0.0;
        for (const auto& [j, v] : block_values) best = std::max(best, std::pow(2.0, j * s) * v);
        return best;
    }
    long double sum = 0.0L;
    for (const auto& [j, v] : block_values) {
        long double term = std::pow(2.0, j * s) * v;
        sum += std::pow(term, static_cast<long double>(r));
    }
    return static_cast<double>(std::pow(sum, 1.0L / r));
}

namespace {

const Grid& grid_of(const RealField& f) { return f.grid(); }
const Grid& grid_of(const VectorField& v) { return v.grid(); }

template <typename FieldT>
double besov_norm_impl(const FieldT& f, const BMParams& bp, const WindowSet& ws) {
    bp.validate();
    BlockRange range = block_range(grid_of(f), bp.homogeneous);
    std::vector<std::pair<int, double>> values(static_cast<std::size_t>(range.j_max - range.j_min + 1));
    parallel_for(values.size(), [&](std::size_t i) {
        int j = range.j_min + static_cast<int>(i);
        values[i] = {j, morrey_norm(dyadic_block(f, j, bp.homogeneous), bp.morrey, ws)};
    });
    return lr_aggregate(values, bp.s, bp.r);
}

template <typename FieldT>
double besov_inf_impl(const FieldT& f, double s, double r, bool homogeneous) {
    BlockRange range = block_range(grid_of(f), homogeneous);
    std::vector<std::pair<int, double>> values(static_cast<std::size_t>(range.j_max - range.j_min + 1));
    parallel_for(values.size(), [&](std::size_t i) {
        int j = range.j_min + static_cast<int>(i);
        values[i] = {j, sup_norm(dyadic_block(f, j, homogeneous))};
    });
    return lr_aggregate(values, s, r);
}

}  // namespace

double besov_morrey_norm(const RealField& f, const BMParams& bp, const WindowSet& ws) {
    return besov_norm_impl(f, bp, ws);
}
double besov_morrey_norm(const VectorField& v, const BMParams& bp, const WindowSet& ws) {
    return besov_norm_impl(v, bp, ws);
}
double besov_infinity_norm(const RealField& f, double s, double r, bool homogeneous) {
    return besov_inf_impl(f, s, r, homogeneous);
}
double besov_infinity_norm(const VectorField& v, double s, double r, bool homogeneous) {
    return besov_inf_impl(v, s, r, homogeneous);
}

namespace {

Json bm_params_json(const BMParams& bp, const WindowSet& ws) {
    Json j;
    j["s"] = bp.s;
    j["p"] = json_number(bp.morrey.p);
    j["q"] = json_number(bp.morrey.q);
    j["r"] = json_number(bp.r);
    j["homogeneous"] = bp.homogeneous;
    j["stride"] = ws.stride;
    j["kmax"] = ws.k_max;
    return j;
}

}  // namespace

EstimateReport lemma23_report(const RealField& f, const BMParams& bp, const WindowSet& ws) {
    bp.validate();
    if (!(bp.s > 0.0)) fail_invalid("relation 2.3 requires s > 0");
    EstimateReport rep;
    rep.lemma = "2.3";
    rep.grid = f.grid();
    rep.params = bm_params_json(bp, ws);

    BMParams inhom = bp;
    inhom.homogeneous = false;
    BMParams hom = bp;
    hom.homogeneous = true;
    rep.lhs = besov_morrey_norm(f, inhom, ws);
    rep.rhs_terms = {{"morrey", morrey_norm(f, bp.morrey, ws)},
                     {"homogeneous_norm", besov_morrey_norm(f, hom, ws)}};
    rep.ratio = safe_ratio(rep.lhs, rep.rhs_total());
    return rep;
}

EstimateReport lemma24_report(const RealField& f, const BMParams& bp, const WindowSet& ws) {
    bp.validate();
    if (!(bp.s > 0.0)) fail_invalid("embedding 2.4 requires s > 0");
    EstimateReport rep;
    rep.lemma = "2.4";
    rep.grid = f.grid();
    rep.params = bm_params_json(bp, ws);
    const double shifted = bp.s - f.grid().dim / bp.morrey.p;
    rep.lhs = besov_infinity_norm(f, shifted, bp.r, bp.homogeneous);
    rep.rhs_terms = {{"besov_morrey", besov_morrey_norm(f, bp, ws)}};
    rep.ratio = safe_ratio(rep.lhs, rep.rhs_total());
    return rep;
}

EstimateReport lemma25_report(const RealField& f, const RealField& g, const BMParams& bp,
                              const WindowSet& ws) {
    bp.validate();
    const int n = f.grid().dim;
    const double critical = static_cast<double>(n) / bp.morrey.p;
    const bool super = bp.s > critical + 1e-12;
    const bool crit = std::abs(bp.s - critical) <= 1e-12 && bp.r == 1.0;
    if (!super && !crit) fail_invalid("algebra 2.5 requires s > n/p, or s = n/p with r = 1");
    require_same_grid(f.grid(), g.grid(), "lemma25_report");

    EstimateReport rep;
    rep.lemma = "2.5";
    rep.grid = f.grid();
    rep.params = bm_params_json(bp, ws);
    RealField prod = multiply_exact(f, g);
    rep.lhs = besov_morrey_norm(prod, bp, ws);
    rep.rhs_terms = {{"norm_product", besov_morrey_norm(f, bp, ws) * besov_morrey_norm(g, bp, ws)}};
    rep.ratio = safe_ratio(rep.lhs, rep.rhs_total());
    return rep;
}

EstimateReport lemma32_report(const RealField& f, const BMParams& bp, const WindowSet& ws) {
    bp.validate();
    const int n = f.grid().dim;
    if (!(bp.s > static_cast<double>(n) / bp.morrey.p)) fail_invalid("logarithmic 3.2 requires s > n/p");

    EstimateReport rep;
    rep.lemma = "3.2";
    rep.grid = f.grid();
    rep.params = bm_params_json(bp, ws);
    rep.lhs = sup_norm(f);
    if (rep.lhs == 0.0) {
        rep.rhs_terms = {{"log_bound", 0.0}};
        rep.ratio = 0.0;
        return rep;
    }
    BMParams inhom = bp;
    inhom.homogeneous = false;
    const double b0 = besov_infinity_norm(f, 0.0, kInf, true);
    const double ns = besov_morrey_norm(f, inhom, ws);
    const double logplus = std::log(std::max(ns, 1.0));
    rep.rhs_terms = {{"log_bound", 1.0 + b0 * (logplus + 1.0)}};
    rep.ratio = safe_ratio(rep.lhs, rep.rhs_total());
    return rep;
}

}  // namespace bmtk
