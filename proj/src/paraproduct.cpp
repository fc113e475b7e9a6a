#include "paraproduct.hpp"

#include <cmath>

#include "spectral_ops.hpp"

namespace bmtk {

RealField paraproduct(const RealField& f, const RealField& g) {
    require_same_grid(f.grid(), g.grid(), "paraproduct");
    const Grid& gr = f.grid();
    BlockRange range = block_range(gr, true);
    SpectralField F = to_spectral(f);
    SpectralField G = to_spectral(g);
    std::vector<RealField> terms(static_cast<std::size_t>(range.j_max - range.j_min + 1));
    parallel_for(terms.size(), [&](std::size_t i) {
        int j = range.j_min + static_cast<int>(i);
        RealField low = to_physical(low_pass(F, j - 2));
        RealField band = to_physical(dyadic_block(G, j, true));
        terms[i] = multiply_exact(low, band);
    });
    RealField out(gr);
    for (const auto& t : terms)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += t[i];
    return out;
}

RealField remainder(const RealField& f, const RealField& g) {
    require_same_grid(f.grid(), g.grid(), "remainder");
    const Grid& gr = f.grid();
    BlockRange range = block_range(gr, true);
    SpectralField F = to_spectral(f);
    SpectralField G = to_spectral(g);
    const int nj = range.j_max - range.j_min + 1;
    std::vector<RealField> f_blocks(nj), g_blocks(nj);
    parallel_for(static_cast<std::size_t>(nj), [&](std::size_t i) {
        int j = range.j_min + static_cast<int>(i);
        f_blocks[i] = to_physical(dyadic_block(F, j, true));
        g_blocks[i] = to_physical(dyadic_block(G, j, true));
    });

    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < nj; ++a)
        for (int b = std::max(0, a - 1); b <= std::min(nj - 1, a + 1); ++b) pairs.emplace_back(a, b);

    std::vector<RealField> terms(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) {
        terms[i] = multiply_exact(f_blocks[pairs[i].first], g_blocks[pairs[i].second]);
    });

    RealField out(gr, F[0].real() * G[0].real());
    for (const auto& t : terms)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += t[i];
    return out;
}

BonySplit bony_split(const RealField& f, const RealField& g) {
    BonySplit s;
    s.t_fg = paraproduct(f, g);
    s.t_gf = paraproduct(g, f);
    s.remainder = remainder(f, g);
    RealField product = multiply_exact(f, g);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < product.size(); ++i) {
        double rec = s.t_fg[i] + s.t_gf[i] + s.remainder[i];
        num = std::max(num, std::abs(rec - product[i]));
        den = std::max(den, std::abs(product[i]));
    }
    s.residual = den > 0.0 ? num / den : num;
    return s;
}

MoserSplit MoserSplit::solver_default(const BMParams& bp) {
    MoserSplit sp;
    sp.p1 = sp.p3 = kInf;
    sp.q1 = sp.q3 = kInf;
    sp.p2 = sp.p4 = bp.morrey.p;
    sp.q2 = sp.q4 = bp.morrey.q;
    sp.r1 = sp.r3 = kInf;
    sp.r2 = sp.r4 = bp.r;
    return sp;
}

namespace {

double recim(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

void check_close(double lhs, double rhs, const char* relation) {
    if (std::abs(lhs - rhs) > 1e-9)
        fail_invalid(std::string("parameter split violates ") + relation);
}

void check_le(double lhs, double rhs, const char* relation) {
    if (lhs > rhs + 1e-9) fail_invalid(std::string("parameter split violates ") + relation);
}

}  // namespace

void MoserSplit::validate(const BMParams& bp, MoserVariant variant) const {
    const double p = bp.morrey.p, q = bp.morrey.q, r = bp.r;
    for (auto [pp, qq] : {std::pair{p1, q1}, {p3, q3}}) {
        if (!(qq >= 1.0) || !(qq <= pp))
            fail_invalid("parameter split violates 1 <= q_i <= p_i on the Morrey factors");
    }
    check_close(recim(p), recim(p1) + recim(p2), "1/p = 1/p1 + 1/p2");
    check_close(recim(p), recim(p3) + recim(p4), "1/p = 1/p3 + 1/p4");
    check_le(recim(q), recim(q1) + recim(q2), "1/q <= 1/q1 + 1/q2");
    check_le(recim(q), recim(q3) + recim(q4), "1/q <= 1/q3 + 1/q4");
    if (variant == MoserVariant::split_regularity) {
        if (!(alpha > 0.0)) fail_invalid("parameter split violates alpha > 0");
        check_close(recim(r), recim(r1) + recim(r2), "1/r = 1/r1 + 1/r2");
        check_close(recim(r), recim(r3) + recim(r4), "1/r = 1/r3 + 1/r4");
    }
}

EstimateReport moser_report(const RealField& f, const RealField& g, const BMParams& bp,
                            MoserVariant variant, const MoserSplit& split, const WindowSet& ws) {
    require_same_grid(f.grid(), g.grid(), "moser_report");
    bp.validate();
    const int n = f.grid().dim;
    const bool endpoint = std::isinf(bp.morrey.p) && std::isinf(bp.r);
    if (!endpoint && !(bp.s > n / bp.morrey.p))
        fail_invalid("product estimate requires s > n/p (or p = r = inf)");
    split.validate(bp, variant);

    EstimateReport rep;
    rep.grid = f.grid();
    rep.lemma = "3.3";
    const char* variant_name = variant == MoserVariant::homogeneous      ? "hom"
                               : variant == MoserVariant::inhomogeneous ? "inhom"
                                                                        : "alpha";
    rep.params = Json{{"variant", variant_name},
                      {"s", bp.s},
                      {"p", json_number(bp.morrey.p)},
                      {"q", json_number(bp.morrey.q)},
                      {"r", json_number(bp.r)},
                      {"p1", json_number(split.p1)}, {"q1", json_number(split.q1)},
                      {"p2", json_number(split.p2)}, {"q2", json_number(split.q2)},
                      {"p3", json_number(split.p3)}, {"q3", json_number(split.q3)},
                      {"p4", json_number(split.p4)}, {"q4", json_number(split.q4)},
                      {"alpha", split.alpha}};

    RealField prod = multiply_exact(f, g);
    auto bm = [&](double s, double p, double q, double r, bool hom) {
        BMParams b;
        b.s = s;
        b.morrey = {p, q};
        b.r = r;
        b.homogeneous = hom;
        return b;
    };

    if (variant == MoserVariant::split_regularity) {
        rep.lhs = besov_morrey_norm(prod, bm(bp.s, bp.morrey.p, bp.morrey.q, bp.r, true), ws);
        double t1 = besov_morrey_norm(f, bm(-split.alpha, split.p1, split.q1, split.r1, true), ws) *
                    besov_morrey_norm(g, bm(bp.s + split.alpha, split.p2, split.q2, split.r2, true), ws);
        double t2 = besov_morrey_norm(g, bm(-split.alpha, split.p3, split.q3, split.r3, true), ws) *
                    besov_morrey_norm(f, bm(bp.s + split.alpha, split.p4, split.q4, split.r4, true), ws);
        rep.rhs_terms = {{"low_high", t1}, {"high_low", t2}};
    } else {
        const bool hom = variant == MoserVariant::homogeneous;
        rep.lhs = besov_morrey_norm(prod, bm(bp.s, bp.morrey.p, bp.morrey.q, bp.r, hom), ws);
        double t1 = morrey_norm(f, MorreyParams{split.p1, split.q1}, ws) *
                    besov_morrey_norm(g, bm(bp.s, split.p2, split.q2, bp.r, hom), ws);
        double t2 = morrey_norm(g, MorreyParams{split.p3, split.q3}, ws) *
                    besov_morrey_norm(f, bm(bp.s, split.p4, split.q4, bp.r, hom), ws);
        rep.rhs_terms = {{"f_morrey_g_besov", t1}, {"g_morrey_f_besov", t2}};
    }
    rep.ratio = safe_ratio(rep.lhs, rep.rhs_total());
    return rep;
}

}  // namespace bmtk
