#include <doctest.h>

#include "besov.hpp"
#include "cutoff.hpp"
#include "test_support.hpp"

using namespace bmtk;
using namespace bmtk::test;

TEST_CASE("cutoff plateaus and golden interior values") {
    CHECK(cutoff_chi(0.0) == 1.0);
    CHECK(cutoff_chi(0.5) == 1.0);
    CHECK(cutoff_chi(1.0) == 1.0);
    CHECK(cutoff_chi(2.0) == 0.0);
    CHECK(cutoff_chi(3.0) == 0.0);
    // interior values of the documented smooth step, frozen independently
    CHECK(cutoff_chi(1.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cutoff_chi(1.25) == doctest::Approx(0.93503083087133594).epsilon(1e-14));
    CHECK(cutoff_chi(1.75) == doctest::Approx(0.06496916912866406).epsilon(1e-13));
    CHECK_THROWS_AS(cutoff_chi(-0.1), Error);
}

TEST_CASE("cutoff is nonincreasing") {
    double prev = 1.0;
    for (int i = 0; i <= 300; ++i) {
        double v = cutoff_chi(i / 100.0);
        CHECK(v <= prev + 1e-15);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("band plateau passes a mode untouched, far bands kill it") {
    Grid g(2, 64, kTwoPi);
    RealField f = single_mode(g, {4, 0, 0});  // rho = 4 = 2^2
    CHECK(rel_field_error(dyadic_block(f, 2, true), f) < 1e-13);
    CHECK(sup_norm(dyadic_block(f, 5, true)) < 1e-13);   // rho = 2^{j+3} case
    CHECK(sup_norm(dyadic_block(f, -1, true)) < 1e-13);
}

TEST_CASE("inhomogeneous ladder: zero below -1, low block at -1") {
    Grid g(2, 32, kTwoPi);
    RealField f = random_band_limited(g, 3);
    CHECK(sup_norm(dyadic_block(f, -2, false)) == 0.0);
    CHECK(sup_norm(dyadic_block(f, -5, false)) == 0.0);
    // the low block passes |xi| <= 1 fully: a |k|=1 mode survives
    RealField m1 = single_mode(g, {0, 1, 0});
    CHECK(rel_field_error(dyadic_block(m1, -1, false), m1) < 1e-13);
}

TEST_CASE("low block plus j>=1 bands rebuild the field") {
    Grid g(2, 64, kTwoPi);
    RealField f = random_band_limited(g, 7);
    RealField sum = dyadic_block(f, -1, false);
    BlockRange r = block_range(g, false);
    for (int j = 1; j <= r.j_max; ++j) sum = sum + dyadic_block(f, j, false);
    CHECK(rel_field_error(sum, f) < 1e-12);
}

TEST_CASE("low_pass plateau and support") {
    Grid g(2, 64, kTwoPi);
    RealField c(g, 2.5);
    for (int j : {-1, 0, 3}) CHECK(rel_field_error(low_pass(c, j), c) < 1e-15);
    RealField f = single_mode(g, {4, 0, 0});           // rho = 2^2
    CHECK(rel_field_error(low_pass(f, 2), f) < 1e-13);  // plateau edge
    CHECK(sup_norm(low_pass(f, 0)) < 1e-13);            // rho = 2^{j+2}
}

TEST_CASE("low_pass converges to the identity at the top level") {
    Grid g(2, 32, kTwoPi);
    RealField f = random_band_limited(g, 9);
    BlockRange r = block_range(g, true);
    CHECK(rel_field_error(low_pass(f, r.j_max + 1), f) < 1e-13);
}

TEST_CASE("decompose/reconstruct both parities; homogeneous keeps the mean aside") {
    Grid g(2, 64, kTwoPi);
    RealField f = random_band_limited(g, 11);
    for (auto& s : f.samples()) s += 0.75;  // nonzero mean

    for (bool hom : {true, false}) {
        DyadicDecomposition d = decompose(f, hom);
        CHECK(rel_field_error(reconstruct(d), f) < 1e-12);
        if (hom) {
            CHECK(d.mean == doctest::Approx(0.75).epsilon(1e-12));
            for (const auto& b : d.blocks) CHECK(std::abs(mean_value(b)) < 1e-14);
        }
    }

    RealField zero(g);
    DyadicDecomposition dz = decompose(zero, true);
    CHECK(dz.mean == 0.0);
    for (const auto& b : dz.blocks) CHECK(sup_norm(b) == 0.0);
}

TEST_CASE("well-separated modes land in disjoint blocks") {
    Grid g(2, 256, kTwoPi);
    RealField f = single_mode(g, {2, 0, 0}) + single_mode(g, {64, 0, 0});
    DyadicDecomposition d = decompose(f, true);
    std::vector<int> active;
    for (int j = d.j_min; j <= d.j_max; ++j)
        if (sup_norm(d.block(j)) > 1e-12) active.push_back(j);
    CHECK(active == std::vector<int>{1, 6});
}

TEST_CASE("almost orthogonality is exact beyond one band of overlap") {
    Grid g(2, 64, kTwoPi);
    RealField f = random_band_limited(g, 13);
    for (int j = 1; j <= 4; ++j) {
        RealField bj = dyadic_block(f, j, true);
        for (int i = j + 2; i <= j + 4; ++i)
            CHECK(sup_norm(dyadic_block(bj, i, true)) < 1e-12 * std::max(1.0, sup_norm(bj)));
        CHECK(sup_norm(dyadic_block(dyadic_block(bj, j + 1, true), j + 4, true)) < 1e-12);
    }
}

TEST_CASE("only the advertised block range is populated on a finite grid") {
    for (int n : {64, 128}) {
        Grid g(2, n, kTwoPi);
        RealField f = random_band_limited(g, 17, 0.5);  // slowly decaying, fills the band
        int top = static_cast<int>(std::lround(std::log2(n / 2))) + 1;
        for (int j = -6; j <= top + 3; ++j) {
            RealField b = dyadic_block(f, j, true);
            bool inside = j >= 0 && j <= top;
            if (!inside) CHECK(sup_norm(b) < 1e-12);
        }
        BlockRange r = block_range(g, true);
        CHECK(r.j_max <= top);
    }
}

TEST_CASE("Bernstein ratios for first derivatives stay in a stable bracket") {
    MorreyParams mp{4.0, 2.0};
    std::vector<double> constants;
    for (int n : {64, 128, 256}) {
        Grid g(2, n, kTwoPi);
        WindowSet ws{0, n >= 256 ? 4 : 1};
        double lo = kInf, hi = 0.0;
        for (int trial = 0; trial < (n >= 256 ? 6 : 12); ++trial) {
            RealField f = random_band_limited(g, 1000 + trial);
            double fn = morrey_norm(f, mp, ws);
            DyadicDecomposition d = decompose(f, true);
            for (int j = d.j_min; j <= d.j_max; ++j) {
                const RealField& b = d.block(j);
                double bn = morrey_norm(b, mp, ws);
                if (!(bn > 1e-12 * fn)) continue;
                double dn = morrey_norm(gradient(b), mp, ws);
                double ratio = dn / (std::pow(2.0, j) * bn);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        }
        CHECK(lo > 0.0);
        CHECK(std::isfinite(hi));
        constants.push_back(std::max(hi, 1.0 / lo));
    }
    for (std::size_t i = 1; i < constants.size(); ++i) {
        CHECK(rel_error(constants[i], constants[i - 1]) < 0.3);
    }
}
