#include <doctest.h>

#include <random>

#include "cellhom/harness.hpp"
#include "cellhom/integrand.hpp"

using namespace cellhom;

TEST_CASE("h is the reciprocal with its scaling property") {
    CHECK(h_eval(1.0) == 1.0);
    CHECK(h_eval(1.25) == 0.8);
    CHECK(h_eval(0.5) == 2.0);  // equality case of the r=1 scaling bound
    CHECK_THROWS_AS(h_eval(0.0), std::domain_error);
    CHECK_THROWS_AS(h_eval(-1.0), std::domain_error);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(0.01, 10.0);
    std::uniform_real_distribution<double> ul(0.01, 0.99);
    for (int i = 0; i < 1000; ++i) {
        const double x = ux(rng), l = ul(rng);
        CHECK(h_eval(l * x) <= h_eval(x) / l + 1e-12 * h_eval(x) / l);
    }
}

TEST_CASE("effective domain membership") {
    CHECK(in_G(Mat2{}));
    CHECK_FALSE(in_G(Mat2{-1.0, -1.0, 1.0, -1.0}));  // I+xi = rotation by pi/2
    CHECK(in_G(Mat2{0.0, 0.5, -0.5, 0.0}));
}

TEST_CASE("g on known points") {
    CHECK(g_eval(Mat2{}) == 1.0);
    const Mat2 F{1.0, 0.5, -0.5, 1.0};
    CHECK(g_eval(F - identity2()) == 0.8);
    CHECK(g_eval(Mat2{-1.0, -1.0, 1.0, -1.0}) == kInf);
}

TEST_CASE("G on known points") {
    CHECK(G_eval(Mat2{}) == 1.0);
    const Mat2 xi{0.5, 0.0, 0.0, 0.5};
    // |xi|^4 = 1/4, det(I+xi) = 9/4
    CHECK(G_eval(xi, 4.0) == doctest::Approx(25.0 / 36.0).epsilon(1e-15));
    CHECK(G_eval(Mat2{-2.0, 0.0, 0.0, 0.0}) == kInf);
}

TEST_CASE("Phi default instance") {
    CHECK(phi_eval(Vec2{0.3, 0.7}, Mat2{}) == 0.0);
    const Mat2 unit{1.0, 0.0, 0.0, 0.0};
    CHECK(phi_eval(Vec2{0.25, 0.25}, unit, 4.0) == doctest::Approx(1.5).epsilon(1e-15));
    const Mat2 xi{0.3, -0.1, 0.8, 0.2};
    CHECK(phi_eval(Vec2{0.0, 0.0}, xi, 4.0) ==
          doctest::Approx(std::pow(frobenius(xi), 4.0)).epsilon(1e-15));
}

TEST_CASE("W combines Phi and g") {
    CHECK(W_eval(Vec2{0.123, 0.456}, Mat2{}) == 1.0);
    const Mat2 xi{0.5, 0.0, 0.0, 0.5};
    CHECK(W_eval(Vec2{0.0, 0.0}, xi, 4.0) == doctest::Approx(25.0 / 36.0).epsilon(1e-15));
    CHECK(W_eval(Vec2{0.1, 0.9}, Mat2{-2.0, 0.0, 0.0, 0.0}) == kInf);
}

TEST_CASE("W is exactly periodic on a dyadic lattice") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const Mat2 xi = sample_in_G(rng);
        for (int a = 0; a < 4; ++a)
            for (int z = -3; z <= 3; ++z) {
                const Vec2 x{a / 4.0, (3 - a) / 8.0};
                CHECK(W_eval(Vec2{x.x + z, x.y + 2 * z}, xi) == W_eval(x, xi));
            }
    }
}

TEST_CASE("grad_W at zero and by symmetry") {
    const Mat2 gz = grad_W(Vec2{0.77, 0.13}, Mat2{});
    CHECK(gz.a11 == -1.0);
    CHECK(gz.a12 == 0.0);
    CHECK(gz.a21 == 0.0);
    CHECK(gz.a22 == -1.0);

    const Mat2 diag{0.3, 0.0, 0.0, 0.3};
    const Mat2 gd = grad_W(Vec2{0.2, 0.6}, diag);
    CHECK(gd.a12 == 0.0);
    CHECK(gd.a21 == 0.0);
    CHECK(gd.a11 == gd.a22);

    CHECK_THROWS_AS(grad_W(Vec2{}, Mat2{-2.0, 0.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("grad_W matches central finite differences") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    const double eps = 1e-6;
    for (int i = 0; i < 50; ++i) {
        Mat2 xi = sample_in_G(rng);
        // keep a margin so the FD stencil stays inside the domain
        xi = 0.9 * xi;
        if (!in_G(xi)) continue;
        const Vec2 x{ux(rng), ux(rng)};
        const Mat2 ga = grad_W(x, xi);
        Mat2 probe = xi;
        double* p[4] = {&probe.a11, &probe.a12, &probe.a21, &probe.a22};
        const double expected[4] = {ga.a11, ga.a12, ga.a21, ga.a22};
        for (int e = 0; e < 4; ++e) {
            const double orig = *p[e];
            *p[e] = orig + eps;
            const double up = W_eval(x, probe);
            *p[e] = orig - eps;
            const double dn = W_eval(x, probe);
            *p[e] = orig;
            if (!std::isfinite(up) || !std::isfinite(dn)) continue;
            const double fd = (up - dn) / (2 * eps);
            CHECK(std::fabs(fd - expected[e]) <= 1e-6 * (1.0 + std::fabs(expected[e])));
        }
    }
}

TEST_CASE("growth constants sandwich W between G bounds") {
    const IntegrandParams gc = growth_constants();
    CHECK(gc.alpha == 0.5);
    CHECK(gc.beta == 1.5);
    CHECK(gc.c == 0.5);
    CHECK(gc.alpha * G_eval(Mat2{}) <= W_eval(Vec2{}, Mat2{}));
    CHECK(W_eval(Vec2{}, Mat2{}) <= gc.beta * (1.0 + G_eval(Mat2{})));

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const Mat2 xi = sample_in_G(rng);
        const Vec2 x{ux(rng), ux(rng)};
        const double w = W_eval(x, xi);
        const double G = G_eval(xi);
        CHECK(gc.alpha * G <= w);
        CHECK(w <= gc.beta * (1.0 + G));
        CHECK(gc.c * std::pow(frobenius(xi), gc.p) <= w);
    }
}

TEST_CASE("boundary rays") {
    CHECK(boundary_ray(Mat2{0.0, 1.0, 0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(boundary_ray(Mat2{1.0, 0.0, 0.0, 1.0}) == kInf);
    CHECK(boundary_ray(Mat2{-1.0, 0.0, 0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(boundary_ray(Mat2{}), std::invalid_argument);
}

TEST_CASE("g midpoint bound on samples") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> lam(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const Mat2 a = sample_in_G(rng);
        const Mat2 b = sample_in_G(rng);
        const double l = lam(rng);
        CHECK(g_eval(l * a + (1.0 - l) * b) <= g_eval(a) + g_eval(b));
    }
}

TEST_CASE("non-convexity witness is exact") {
    const Mat2 F{1.0, 0.5, -0.5, 1.0};
    const Mat2 Ft{1.0, -0.5, 0.5, 1.0};
    auto g_tilde = [](const Mat2& m) { return g_eval(m - identity2()); };
    CHECK(g_tilde(0.5 * F + 0.5 * Ft) == 1.0);
    CHECK(0.5 * (g_tilde(F) + g_tilde(Ft)) == 0.8);
}

TEST_CASE("G is bounded on the small ball") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double sup = 0.0;
    for (int i = 0; i < 5000; ++i) {
        Mat2 d{u(rng), u(rng), u(rng), u(rng)};
        const double n = frobenius(d);
        if (n == 0.0) continue;
        const double val = G_eval((0.25 / n) * d);
        CHECK(std::isfinite(val));
        sup = std::max(sup, val);
    }
    CHECK(std::isfinite(sup));
}

TEST_CASE("density factory") {
    CHECK(make_density("W")->id() == "W");
    CHECK(make_density("G")->id() == "G");
    CHECK(make_density("doublewell")->id() == "doublewell");
    CHECK_THROWS_AS(make_density("nope"), std::invalid_argument);
    // weights per the ru-usc construction
    CHECK(make_density("g")->weight_a(Vec2{}) == 1.0);
    CHECK(make_density("W")->weight_a(Vec2{}) == 2.0);
    CHECK(make_density("Phi")->weight_a(Vec2{}) == 2.0);
}
