#pragma once

#include <map>
#include <utility>
#include <vector>

#include "cellhom/solver.hpp"

namespace cellhom {

// One solved cell problem, normalized to an energy density.
struct CellResult {
    Mat2 xi;
    int k = 1;
    int N = 8;
    double density = 0.0;  // S_xi(kY) / k^2
    SolveDiagnostics diagnostics;
};

struct RadialPoint {
    double t = 0.0;
    double hw = 0.0;
};

// Per-xi aggregate of the multi-cell formula and its radial trace.
struct HomogRecord {
    Mat2 xi;
    std::vector<CellResult> cells;
    double hw = 0.0;  // min over the per-k densities
    std::vector<RadialPoint> radial_trace;
    double hw_hat = std::numeric_limits<double>::quiet_NaN();
    double stabilization_gap = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<double, double>> delta_rows;  // (t, sampled modulus)
};

// N per k: the stored map wins, otherwise 8 for k <= 2 and 6 above.
struct GridSchedule {
    std::map<int, int> n_for_k;
    int at(int k) const {
        auto it = n_for_k.find(k);
        if (it != n_for_k.end()) return it->second;
        return k <= 2 ? 8 : 6;
    }
};

// Minimized zero-boundary energy over a grid-aligned rectangle (not
// normalized).  Warm starts are extra initial fields for the descent.
SolveResult S_xi(const Mat2& xi, const Rect& rect, const EnergyDensity& density,
                 int N, const SolverOptions& opts,
                 const std::vector<DisplacementField>& warm_starts = {});

// Periodic tiling of a minimizer onto a larger mesh with the same spacing;
// zero-boundary on the source makes the tiling admissible on the target.
DisplacementField tile_field(const DisplacementField& src, const CellMesh& dst);

// Multi-cell homogenized density: min_k S_xi(kY)/k^2 over k_list.
// Consecutive doubling k's warm-start from the tiled previous minimizer.
HomogRecord hW(const Mat2& xi, const EnergyDensity& density,
               const std::vector<int>& k_list, const GridSchedule& grid,
               const SolverOptions& opts);

// Default radial abscissas 1 - 2^-j, j = 1..J.
std::vector<double> default_t_list(int J = 6);

// Trace t -> hW(t*xi) along t_list; the extrapolated boundary value is the
// last trace entry, reported with its stabilization gap.
HomogRecord radial_extension(const Mat2& xi, const EnergyDensity& density,
                             const std::vector<double>& t_list,
                             const std::vector<int>& k_list,
                             const GridSchedule& grid, const SolverOptions& opts);

// Single-cell Dacorogna relaxation with the x-slot frozen; an upper bound to
// the pointwise quasiconvexification.
double quasiconvexify_point(const EnergyDensity& f, const Vec2& x, const Mat2& xi,
                            int N, const SolverOptions& opts);

// Sampled ru-usc modulus: max over samples of
//   (L(x, t*xi) - L(x, xi)) / (a(x) + L(x, xi)).
double delta_estimate(const EnergyDensity& L, double t,
                      const std::vector<std::pair<Vec2, Mat2>>& samples);

}  // namespace cellhom
