#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include "cellhom/homog.hpp"

namespace cellhom {

struct CheckResult {
    std::string name;
    bool passed = false;
    double observed = 0.0;  // sampled extreme (sup of a ratio, worst gap, ...)
    double bound = 0.0;     // the bound it was held against (NaN if none)
    std::string note;
};

struct Report {
    std::string title;
    std::vector<CheckResult> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

struct StructureOptions {
    std::uint64_t seed = 0;
    int pair_samples = 10000;     // convexity / midpoint-bound pairs
    int ray_samples = 1000;       // boundary-ray scaling points
    int growth_samples = 1000;    // sandwich / coercivity samples
    double ball_radius = 0.25;    // finite-sup ball
};

// Domain and integrand structure suite: membership ball at 0, convexity of
// the effective domain, t-scaling of boundary rays, midpoint bound for g,
// periodicity, growth sandwich, finite sup on a ball, the non-convexity
// witness, and the rotation counterexample.
Report verify_structure(const StructureOptions& opts = {});

// Convexity spot check reusable with an arbitrary membership oracle (the
// negative-control fixture passes a broken, non-convex domain).
CheckResult check_domain_convexity(const std::function<bool(const Mat2&)>& member,
                                   std::uint64_t seed, int samples);

// Rejection sample from the effective domain (bounded box cut with G).
Mat2 sample_in_G(std::mt19937_64& rng);

// Minimizes (1/|Q|) * integral over Q of W(x/eps, xi + grad phi) over
// zero-boundary fields.  Assembled, via the exact change of variables, as
// S_xi((1/eps) Q) / |(1/eps) Q| so the two routes agree bit-for-bit.
double local_dirichlet_density(const Mat2& xi, const Rect& Q, double eps,
                               const EnergyDensity& density, int N,
                               const SolverOptions& opts);

struct GammaDiagnostic {
    std::vector<std::pair<double, double>> eps_densities;  // (eps, density)
    double hw = 0.0;
    double hw_hat = 0.0;
    double gap_eps_vs_hw = 0.0;      // relative
    double gap_hw_hat_vs_hw = 0.0;   // relative
};

// Convergence diagnostic: local Dirichlet densities along an eps sweep plus
// the radial trace; reports the triple and its relative gaps.
GammaDiagnostic gamma_diagnostic(const Mat2& xi, const EnergyDensity& density,
                                 const std::vector<double>& eps_list,
                                 const std::vector<int>& k_list,
                                 const GridSchedule& grid,
                                 const SolverOptions& opts);

struct DeltaRow {
    double t = 0.0;
    double delta_g = 0.0;
    double bound_g = 0.0;       // (1 - t^2) / t^2
    double delta_phi = 0.0;
    double delta_w = 0.0;
    double delta_w_bound = 0.0;  // max(delta_phi, delta_g)
    double delta_hw = std::numeric_limits<double>::quiet_NaN();
    // W-modulus over the shared grid (hw_grid x an x-lattice, plus the random
    // samples); the reference the two-level modulus is held against.
    double delta_w_shared = std::numeric_limits<double>::quiet_NaN();
};

struct RuUscOptions {
    std::vector<double> t_values{0.5, 0.9, 0.99};
    int samples = 1000;
    std::uint64_t seed = 0;
    bool include_hw = false;     // tabulate the two-level hW modulus
    std::vector<Mat2> hw_grid;   // shared xi-grid for the hW comparison
    std::vector<int> k_list{1, 2};
    GridSchedule grid;
    SolverOptions solver;
};

struct RuUscReport {
    std::vector<DeltaRow> rows;
    bool bounds_hold = false;     // delta_g <= bound_g and delta_w <= bound at all t
    bool monotone_to_zero = false;
};

RuUscReport ru_usc_suite(const RuUscOptions& opts = {});

}  // namespace cellhom
