#include <doctest.h>

#include <Eigen/Dense>

#include "test_support.hpp"

using namespace bmtk;
using namespace bmtk::test;

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid(4, 32, kTwoPi), Error);
    CHECK_THROWS_AS(Grid(2, 48, kTwoPi), Error);
    CHECK_THROWS_AS(Grid(2, 4, kTwoPi), Error);
    CHECK_THROWS_AS(Grid(2, 32, -1.0), Error);
    CHECK_NOTHROW(Grid(2, 8, 1.0));
    CHECK_NOTHROW(Grid(3, 16, kTwoPi));
}

TEST_CASE("constant field transforms to a pure zero mode") {
    Grid g(2, 16, kTwoPi);
    RealField f(g, 3.25);
    SpectralField F = to_spectral(f);
    CHECK(F[0].real() == doctest::Approx(3.25).epsilon(1e-14));
    double off = 0.0;
    for (std::size_t i = 1; i < F.size(); ++i) off = std::max(off, std::abs(F[i]));
    CHECK(off < 1e-14);
}

TEST_CASE("sin(x1) occupies exactly the two conjugate modes") {
    Grid g(2, 32, kTwoPi);
    RealField f = single_mode(g, {1, 0, 0}, 1.0, -kTwoPi / 4.0);  // cos(x - pi/2) = sin x
    SpectralField F = to_spectral(f);
    int nonzero = 0;
    for_each_mode(g, [&](std::size_t i, const std::array<int, 3>& k) {
        if (std::abs(F[i]) > 1e-12) {
            ++nonzero;
            CHECK(std::abs(k[0]) == 1);
            CHECK(k[1] == 0);
        }
    });
    CHECK(nonzero == 2);
}

TEST_CASE("round trip is the identity") {
    Grid g(2, 32, kTwoPi);
    RealField f = random_band_limited(g, 11);
    CHECK(rel_field_error(to_physical(to_spectral(f)), f) < 1e-12);
}

TEST_CASE("non-finite samples are rejected") {
    Grid g(2, 16, kTwoPi);
    RealField f(g);
    f[7] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(to_spectral(f), Error);
}

TEST_CASE("Parseval ties grid energy to coefficient energy") {
    Grid g(2, 64, kTwoPi);
    RealField f = random_band_limited(g, 5);
    SpectralField F = to_spectral(f);
    long double coeff_energy = 0.0L;
    for (std::size_t i = 0; i < F.size(); ++i) coeff_energy += std::norm(F[i]);
    double lhs = l2_norm(f);
    double rhs = std::sqrt(static_cast<double>(coeff_energy) * std::pow(g.length, g.dim));
    CHECK(rel_error(lhs, rhs) < 1e-12);
}

TEST_CASE("spectral derivative: d/dx sin = cos, constants die") {
    Grid g(2, 64, kTwoPi);
    RealField s = single_mode(g, {1, 0, 0}, 1.0, -kTwoPi / 4.0);
    RealField c = single_mode(g, {1, 0, 0}, 1.0, 0.0);
    CHECK(rel_field_error(spectral_derivative(s, 0, 1), c) < 1e-12);
    CHECK(sup_norm(spectral_derivative(RealField(g, 4.0), 0, 1)) < 1e-13);
    CHECK_THROWS_AS(spectral_derivative(s, 0, 0), Error);
    CHECK_THROWS_AS(spectral_derivative(s, 2, 1), Error);
}

TEST_CASE("spectral derivative beats centered differences at their own game") {
    Grid g(2, 256, kTwoPi);
    RealField f = single_mode(g, {5, 0, 0});
    RealField spec = spectral_derivative(f, 0, 1);
    RealField fd = fd_derivative(f, 0);
    // centered differences carry an O(h^2) truncation error ~ k^3 h^2 / 6
    double h = g.spacing();
    double expected = std::pow(5.0, 3) * h * h / 6.0;
    double measured = max_abs_diff(spec, fd);
    CHECK(measured == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("second derivative matches analytic factor") {
    Grid g(2, 64, kTwoPi);
    RealField f = single_mode(g, {3, 0, 0});
    RealField got = spectral_derivative(f, 0, 2);
    CHECK(rel_field_error(got, -9.0 * f) < 1e-12);
}

TEST_CASE("leray projection: identity on solenoidal, kills gradients, idempotent, self-adjoint") {
    Grid g(2, 64, kTwoPi);
    VectorField v = random_divergence_free(g, 21);
    CHECK(rel_field_error(leray_project(v), v) < 1e-12);

    RealField phi = random_band_limited(g, 22);
    VectorField gphi = gradient(phi);
    CHECK(sup_norm(leray_project(gphi)) < 1e-12 * std::max(1.0, sup_norm(gphi)));

    VectorField w(g);
    w[0] = random_band_limited(g, 23);
    w[1] = random_band_limited(g, 24);
    VectorField pw = leray_project(w);
    CHECK(rel_field_error(leray_project(pw), pw) < 1e-12);
    CHECK(divergence_defect(pw) < 1e-12);

    // zero mode passes through
    VectorField c(g);
    for (auto& s : c[0].samples()) s = 1.5;
    for (auto& s : c[1].samples()) s = -0.5;
    CHECK(rel_field_error(leray_project(c), c) < 1e-14);

    // self-adjointness on the discrete inner product
    VectorField u(g);
    u[0] = random_band_limited(g, 25);
    u[1] = random_band_limited(g, 26);
    auto dot = [](const VectorField& a, const VectorField& b) {
        long double s = 0.0L;
        for (int d = 0; d < a.dim(); ++d)
            for (std::size_t i = 0; i < a[d].size(); ++i)
                s += static_cast<long double>(a[d][i]) * b[d][i];
        return static_cast<double>(s);
    };
    double lhs = dot(leray_project(u), w);
    double rhs = dot(u, leray_project(w));
    CHECK(rel_error(lhs, rhs) < 1e-10);
}

TEST_CASE("pressure gradient vanishes for constant drift") {
    Grid g(2, 32, kTwoPi);
    VectorField w(g);
    for (auto& s : w[0].samples()) s = 2.0;
    for (auto& s : w[1].samples()) s = -1.0;
    VectorField v = random_divergence_free(g, 31);
    CHECK(sup_norm(pressure_gradient(w, v)) < 1e-12);
}

TEST_CASE("pressure gradient rejects compressible drift") {
    Grid g(2, 32, kTwoPi);
    VectorField w(g);
    w[0] = single_mode(g, {1, 0, 0});
    w[1] = RealField(g);
    VectorField v = random_divergence_free(g, 32);
    CHECK_THROWS_AS(pressure_gradient(w, v), Error);
}

TEST_CASE("pressure gradient agrees with a dense solve of the same operator") {
    Grid g(2, 32, kTwoPi);
    VectorField w = random_divergence_free(g, 33);
    VectorField v(g);
    v[0] = random_band_limited(g, 34);
    v[1] = random_band_limited(g, 35);

    VectorField gp = pressure_gradient(w, v);

    // Oracle: assemble div((w.grad)v) identically, then dense-LU the
    // spectral Laplacian in physical space and differentiate.
    VectorField adv = advect(w, v);
    std::vector<SpectralField> A;
    for (int d = 0; d < 2; ++d) A.push_back(to_spectral(adv[d]));
    RealField rhs = to_physical(spectral_divergence(A));

    const int n = g.size;
    const int m = n * n;
    Eigen::MatrixXd L(m, m);
    for (int col = 0; col < m; ++col) {
        RealField e(g);
        e[static_cast<std::size_t>(col)] = 1.0;
        SpectralField E = to_spectral(e);
        SpectralField lap(g);
        for_each_mode(g, [&](std::size_t f, const std::array<int, 3>& k) {
            double k2 = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1];
            lap[f] = E[f] * k2;  // -Laplacian has symbol |xi|^2
        });
        RealField le = to_physical(lap);
        for (int row = 0; row < m; ++row) L(row, col) = le[static_cast<std::size_t>(row)];
    }
    // pin the mean so the system becomes invertible
    Eigen::MatrixXd Lp = L + Eigen::MatrixXd::Constant(m, m, 1.0 / m);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) b(i) = rhs[static_cast<std::size_t>(i)];
    Eigen::VectorXd p = Lp.partialPivLu().solve(b);

    RealField P(g);
    for (int i = 0; i < m; ++i) P[static_cast<std::size_t>(i)] = p(i);
    VectorField gp_oracle = gradient(P);

    CHECK(rel_field_error(gp, gp_oracle) < 1e-10);
}

TEST_CASE("steady cellular flow: recovered pressure kills the Euler residual") {
    Grid g(2, 64, kTwoPi);
    VectorField v = taylor_green(g);
    VectorField gp = pressure_gradient(v, v);
    VectorField adv = advect(v, v);
    VectorField residual = adv + gp;  // d_t v = -(adv + grad P) must vanish
    CHECK(sup_norm(residual) < 1e-10 * sup_norm(v));
}

TEST_CASE("dealias: 2/3 cutoff behaves per mode") {
    Grid g(2, 32, kTwoPi);
    const int cut = 32 / 3;  // 10
    RealField low = single_mode(g, {cut, 2, 0});
    CHECK(rel_field_error(dealias(low), low) < 1e-13);
    RealField high = single_mode(g, {cut + 1, 0, 0});
    CHECK(sup_norm(dealias(high)) < 1e-13);
}

TEST_CASE("dealiased product matches the exact convolution on retained modes") {
    Grid g(2, 32, kTwoPi);
    // aliasing-prone pair: k1 + k2 wraps on the 32 lattice
    RealField f = single_mode(g, {9, 3, 0});
    RealField gg = single_mode(g, {8, -2, 0});
    RealField direct = multiply_dealias(f, gg);
    RealField exact = dealias(convolution_product(f, gg));
    CHECK(rel_field_error(direct, exact) < 1e-12);
}

TEST_CASE("multiply_exact equals the direct convolution") {
    Grid g(2, 16, kTwoPi);
    RealField f = random_band_limited(g, 41);
    RealField h = random_band_limited(g, 42);
    CHECK(rel_field_error(multiply_exact(f, h), convolution_product(f, h)) < 1e-12);
}

TEST_CASE("operations are linear") {
    Grid g(2, 32, kTwoPi);
    RealField f = random_band_limited(g, 51);
    RealField h = random_band_limited(g, 52);
    RealField combo = 2.0 * f + (-3.0) * h;
    RealField lhs = spectral_derivative(combo, 1, 1);
    RealField rhs = 2.0 * spectral_derivative(f, 1, 1) + (-3.0) * spectral_derivative(h, 1, 1);
    CHECK(rel_field_error(lhs, rhs) < 1e-12);
    CHECK(rel_field_error(dealias(combo), 2.0 * dealias(f) + (-3.0) * dealias(h)) < 1e-12);
}

TEST_CASE("3D transforms and curl") {
    Grid g(3, 16, kTwoPi);
    RealField f = random_band_limited(g, 61);
    CHECK(rel_field_error(to_physical(to_spectral(f)), f) < 1e-12);
    VectorField v = random_divergence_free(g, 62);
    VectorField w = curl3(v);
    CHECK(divergence_defect(w) < 1e-12);
}
