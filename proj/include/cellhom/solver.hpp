#pragma once

#include <cstdint>
#include <tuple>

#include "cellhom/fem_cell.hpp"

namespace cellhom {

struct SolverOptions {
    int max_iters = 2000;
    double grad_tol = 1e-8;       // max-norm of the nodal gradient
    double armijo = 1e-4;         // sufficient-decrease coefficient
    double backtrack = 0.5;       // step-halving factor
    int history = 10;             // quasi-Newton memory
    int multistart = 3;           // independent descent runs (>= 1)
    double perturbation = 1e-2;   // nodal perturbation scale for restarts
    std::uint64_t seed = 0;
};

struct SolveDiagnostics {
    double energy = 0.0;
    int iterations = 0;
    double grad_norm = 0.0;
    int barrier_rejections = 0;   // line-search trials with infinite energy
    int restarts_used = 0;        // multistart runs actually executed
    bool converged = false;
};

struct SolveResult {
    DisplacementField field;
    double energy = 0.0;
    SolveDiagnostics diagnostics;
};

// Minimizes the discrete cell energy over zero-boundary nodal fields.
// Start 0 is the zero field (plus any warm starts); further starts perturb it
// with seeded noise.  The returned value never exceeds the zero-field energy.
// Throws std::invalid_argument when xi is outside the effective domain.
SolveResult minimize(const Mat2& xi, const EnergyDensity& density,
                     const CellMesh& mesh, const SolverOptions& opts,
                     const std::vector<DisplacementField>& warm_starts = {});

}  // namespace cellhom
