#include "cellhom/harness.hpp"

#include <cmath>
#include <sstream>

namespace cellhom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

Mat2 sample_in_G(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> diag(-0.95, 2.0);
    std::uniform_real_distribution<double> off(-2.5, 2.5);
    for (;;) {
        Mat2 xi{diag(rng), off(rng), off(rng), diag(rng)};
        if (in_G(xi)) return xi;
    }
}

CheckResult check_domain_convexity(const std::function<bool(const Mat2&)>& member,
                                   std::uint64_t seed, int samples) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> diag(-0.95, 2.0);
    std::uniform_real_distribution<double> off(-2.5, 2.5);
    std::uniform_real_distribution<double> lam(0.0, 1.0);
    auto draw = [&] {
        for (;;) {
            Mat2 xi{diag(rng), off(rng), off(rng), diag(rng)};
            if (member(xi)) return xi;
        }
    };
    int violations = 0;
    for (int i = 0; i < samples; ++i) {
        const Mat2 a = draw();
        const Mat2 b = draw();
        const double l = lam(rng);
        if (!member(l * a + (1.0 - l) * b)) ++violations;
    }
    CheckResult c;
    c.name = "domain convexity";
    c.passed = violations == 0;
    c.observed = violations;
    c.bound = 0.0;
    c.note = std::to_string(samples) + " sampled pairs";
    return c;
}

Report verify_structure(const StructureOptions& opts) {
    Report rep;
    rep.title = "structure suite";
    std::mt19937_64 rng(opts.seed);
    const IntegrandParams gc = growth_constants();

    // 0 in the interior: a small ball of directions stays inside.
    {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        int bad = 0;
        for (int i = 0; i < 1000; ++i) {
            Mat2 d{u(rng), u(rng), u(rng), u(rng)};
            const double n = frobenius(d);
            if (n == 0.0) continue;
            if (!in_G((0.05 / n) * d)) ++bad;
        }
        rep.checks.push_back({"membership ball at 0", bad == 0,
                              static_cast<double>(bad), 0.0, "radius 0.05"});
    }

    rep.checks.push_back(
        check_domain_convexity([](const Mat2& m) { return in_G(m); },
                               opts.seed + 1, opts.pair_samples));

    // t * closure(G) subset int(G): scale boundary-ray points inward.
    {
        std::mt19937_64 r2(opts.seed + 2);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double ts[] = {0.1, 0.5, 0.9, 0.99, 0.999};
        int bad = 0, tested = 0;
        while (tested < opts.ray_samples) {
            Mat2 d{u(r2), u(r2), u(r2), u(r2)};
            if (frobenius(d) < 1e-6) continue;
            double s;
            try {
                s = boundary_ray(d);
            } catch (const std::invalid_argument&) {
                continue;
            }
            if (!std::isfinite(s)) continue;
            ++tested;
            for (double t : ts)
                if (!in_G((t * s) * d)) ++bad;
        }
        rep.checks.push_back({"boundary-ray inward scaling", bad == 0,
                              static_cast<double>(bad), 0.0,
                              std::to_string(tested) + " rays, t up to 0.999"});
    }

    // Midpoint bound for g.
    {
        std::mt19937_64 r3(opts.seed + 3);
        std::uniform_real_distribution<double> lam(0.0, 1.0);
        int bad = 0;
        double worst = -kInf;
        for (int i = 0; i < opts.pair_samples; ++i) {
            const Mat2 a = sample_in_G(r3);
            const Mat2 b = sample_in_G(r3);
            const double l = lam(r3);
            const double lhs = g_eval(l * a + (1.0 - l) * b);
            const double rhs = g_eval(a) + g_eval(b);
            worst = std::max(worst, lhs - rhs);
            if (lhs > rhs) ++bad;
        }
        rep.checks.push_back({"g midpoint bound", bad == 0, worst, 0.0,
                              "worst g(l a + (1-l) b) - (g(a)+g(b))"});
    }

    // Periodicity of W on a dyadic lattice of x and integer z.
    {
        int bad = 0;
        std::mt19937_64 r4(opts.seed + 4);
        for (int i = 0; i < 200; ++i) {
            const Mat2 xi = sample_in_G(r4);
            for (int a = 0; a < 8; ++a)
                for (int b = 0; b < 8; ++b)
                    for (int z = -2; z <= 2; ++z) {
                        const Vec2 x{a / 8.0, b / 8.0};
                        const Vec2 xs{x.x + z, x.y - z};
                        if (W_eval(x, xi, gc.p) != W_eval(xs, xi, gc.p)) ++bad;
                    }
        }
        rep.checks.push_back({"W periodicity (exact, dyadic lattice)", bad == 0,
                              static_cast<double>(bad), 0.0, ""});
    }

    // Growth sandwich and coercivity for the default W.
    {
        std::mt19937_64 r5(opts.seed + 5);
        std::uniform_real_distribution<double> ux(0.0, 1.0);
        int bad = 0;
        for (int i = 0; i < opts.growth_samples; ++i) {
            const Mat2 xi = sample_in_G(r5);
            const Vec2 x{ux(r5), ux(r5)};
            const double w = W_eval(x, xi, gc.p);
            const double G = G_eval(xi, gc.p);
            if (!(gc.alpha * G <= w && w <= gc.beta * (1.0 + G))) ++bad;
            if (!(gc.c * std::pow(frobenius(xi), gc.p) <= w)) ++bad;
        }
        rep.checks.push_back({"growth sandwich and p-coercivity", bad == 0,
                              static_cast<double>(bad), 0.0,
                              "alpha=1/2, beta=3/2, c=1/2"});
    }

    // Finite sup of G on the closed ball of radius rho0.
    {
        std::mt19937_64 r6(opts.seed + 6);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double sup = 0.0;
        for (int i = 0; i < 2000; ++i) {
            Mat2 d{u(r6), u(r6), u(r6), u(r6)};
            const double n = frobenius(d);
            if (n == 0.0) continue;
            std::uniform_real_distribution<double> rad(0.0, opts.ball_radius);
            const Mat2 xi = (rad(r6) / n) * d;
            sup = std::max(sup, G_eval(xi, gc.p));
        }
        rep.checks.push_back({"finite sup of G on ball", std::isfinite(sup), sup,
                              kNaN, "rho0 = " + fmt(opts.ball_radius)});
    }

    // (A3): sampled sup of G(t a + (1-t) b) / (1 + G(a) + G(b)) is finite.
    {
        std::mt19937_64 r7(opts.seed + 7);
        std::uniform_real_distribution<double> lam(0.0, 1.0);
        double c3 = 0.0;
        for (int i = 0; i < opts.pair_samples; ++i) {
            const Mat2 a = sample_in_G(r7);
            const Mat2 b = sample_in_G(r7);
            const double l = lam(r7);
            c3 = std::max(c3, G_eval(l * a + (1.0 - l) * b, gc.p) /
                                  (1.0 + G_eval(a, gc.p) + G_eval(b, gc.p)));
        }
        rep.checks.push_back({"convex-combination growth constant", std::isfinite(c3),
                              c3, kNaN, "empirical C3"});
    }

    // Non-convexity witness: exact values 1 and 4/5.
    {
        const Mat2 F{1.0, 0.5, -0.5, 1.0};
        const Mat2 Ft{1.0, -0.5, 0.5, 1.0};
        const Mat2 I = identity2();
        auto g_tilde = [&](const Mat2& m) { return g_eval(m - I); };
        const double mid = g_tilde(0.5 * F + 0.5 * Ft);
        const double avg = 0.5 * (g_tilde(F) + g_tilde(Ft));
        const bool ok = mid == 1.0 && avg == 0.8 && mid > avg;
        rep.checks.push_back({"non-convexity witness", ok, mid, avg,
                              "g~(sym F) = 1 > 4/5"});
    }

    // Rotation by pi/2 lies outside the domain.
    {
        const Mat2 rot{-1.0, -1.0, 1.0, -1.0};
        rep.checks.push_back({"rotation pi/2 outside domain", !in_G(rot),
                              in_G(rot) ? 1.0 : 0.0, 0.0, ""});
    }

    // Empirical Lipschitz constant of Phi on samples.
    {
        std::mt19937_64 r8(opts.seed + 8);
        std::uniform_real_distribution<double> ux(0.0, 1.0);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        double kmax = 0.0;
        for (int i = 0; i < opts.growth_samples; ++i) {
            const Vec2 x{ux(r8), ux(r8)};
            const Mat2 a{u(r8), u(r8), u(r8), u(r8)};
            const Mat2 b{u(r8), u(r8), u(r8), u(r8)};
            const double diff = std::fabs(phi_eval(x, a, gc.p) - phi_eval(x, b, gc.p));
            const double scale = frobenius(a - b) *
                                 (1.0 + std::pow(frobenius(a), gc.p - 1.0) +
                                  std::pow(frobenius(b), gc.p - 1.0));
            if (scale > 0.0) kmax = std::max(kmax, diff / scale);
        }
        rep.checks.push_back({"Phi Lipschitz constant", std::isfinite(kmax), kmax,
                              kNaN, "empirical K"});
    }

    return rep;
}

double local_dirichlet_density(const Mat2& xi, const Rect& Q, double eps,
                               const EnergyDensity& density, int N,
                               const SolverOptions& opts) {
    const double inv = 1.0 / eps;
    if (std::fabs(inv - std::lround(inv)) > 1e-12)
        throw std::invalid_argument("local_dirichlet_density: 1/eps must be an integer");
    const Rect scaled{Q.x0 * inv, Q.y0 * inv, Q.x1 * inv, Q.y1 * inv};
    const SolveResult res = S_xi(xi, scaled, density, N, opts);
    return res.energy / (scaled.width() * scaled.height());
}

GammaDiagnostic gamma_diagnostic(const Mat2& xi, const EnergyDensity& density,
                                 const std::vector<double>& eps_list,
                                 const std::vector<int>& k_list,
                                 const GridSchedule& grid,
                                 const SolverOptions& opts) {
    if (!density.in_domain(xi))
        throw std::invalid_argument("gamma_diagnostic: xi outside the effective domain");
    GammaDiagnostic out;
    for (double eps : eps_list) {
        const int N = grid.at(static_cast<int>(std::lround(1.0 / eps)));
        out.eps_densities.push_back(
            {eps, local_dirichlet_density(xi, Rect{0, 0, 1, 1}, eps, density, N, opts)});
    }
    const HomogRecord rad =
        radial_extension(xi, density, default_t_list(), k_list, grid, opts);
    out.hw = rad.hw;
    out.hw_hat = rad.hw_hat;
    const double last = out.eps_densities.back().second;
    out.gap_eps_vs_hw = std::fabs(last - out.hw) / std::max(1e-300, std::fabs(out.hw));
    out.gap_hw_hat_vs_hw =
        std::fabs(out.hw_hat - out.hw) / std::max(1e-300, std::fabs(out.hw));
    return out;
}

RuUscReport ru_usc_suite(const RuUscOptions& opts) {
    const GSmallDensity g;
    const PhiDensity phi;
    const WDensity w;

    // Shared sample set: domain points paired with cell positions.
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    std::vector<std::pair<Vec2, Mat2>> samples;
    samples.reserve(opts.samples);
    for (int i = 0; i < opts.samples; ++i)
        samples.push_back({{ux(rng), ux(rng)}, sample_in_G(rng)});

    // Shared-grid samples for the two-level comparison: every hw_grid point
    // crossed with a cell x-lattice, on top of the random draw above.
    std::vector<std::pair<Vec2, Mat2>> shared = samples;
    if (opts.include_hw) {
        for (const Mat2& xi : opts.hw_grid)
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j)
                    shared.push_back({{(i + 0.5) / 8.0, (j + 0.5) / 8.0}, xi});
    }

    RuUscReport rep;
    rep.bounds_hold = true;
    for (double t : opts.t_values) {
        DeltaRow row;
        row.t = t;
        row.delta_g = delta_estimate(g, t, samples);
        row.bound_g = (1.0 - t * t) / (t * t);
        row.delta_phi = delta_estimate(phi, t, samples);
        row.delta_w = delta_estimate(w, t, samples);
        row.delta_w_bound = std::max(row.delta_phi, row.delta_g);
        if (opts.include_hw && !opts.hw_grid.empty()) {
            row.delta_w_shared = delta_estimate(w, t, shared);
            double sup = -kInf;
            for (const Mat2& xi : opts.hw_grid) {
                const double base =
                    hW(xi, w, opts.k_list, opts.grid, opts.solver).hw;
                const double scaled =
                    hW(t * xi, w, opts.k_list, opts.grid, opts.solver).hw;
                // <a> = integral of the weight over the cell; constant here.
                const double mean_a = w.weight_a(Vec2{0.5, 0.5});
                sup = std::max(sup, (scaled - base) / (mean_a + base));
            }
            row.delta_hw = sup;
        }
        if (!(row.delta_g <= row.bound_g) || !(row.delta_w <= row.delta_w_bound + 1e-12))
            rep.bounds_hold = false;
        rep.rows.push_back(row);
    }

    rep.monotone_to_zero = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        if (!(rep.rows[i].t > rep.rows[i - 1].t)) continue;
        if (rep.rows[i].delta_g > rep.rows[i - 1].delta_g + 1e-12 ||
            rep.rows[i].delta_w > rep.rows[i - 1].delta_w + 1e-12)
            rep.monotone_to_zero = false;
    }
    return rep;
}

}  // namespace cellhom
