#include "cellhom/solver.hpp"

#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace cellhom {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double max_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

struct RunOutcome {
    std::vector<double> dofs;
    double energy = 0.0;
    SolveDiagnostics diag;
};

// One limited-memory quasi-Newton descent with Armijo backtracking.
// Trial steps with infinite energy are rejected by the same halving loop;
// the feasible set is open so backtracking always re-enters it.
RunOutcome descend(const Mat2& xi, const EnergyDensity& density,
                   const CellMesh& mesh, const SolverOptions& opts,
                   std::vector<double> x0) {
    DisplacementField field(mesh);
    auto energy_at = [&](const std::vector<double>& x) {
        field.unpack_free(x);
        return cell_energy(field, xi, density);
    };
    auto grad_at = [&](const std::vector<double>& x) {
        field.unpack_free(x);
        const auto g = cell_energy_gradient(field, xi, density);
        std::vector<double> out;
        out.reserve(x.size());
        for (int n : field.free_nodes()) {
            out.push_back(g[n].x);
            out.push_back(g[n].y);
        }
        return out;
    };

    RunOutcome run;
    run.dofs = std::move(x0);
    run.energy = energy_at(run.dofs);
    if (!std::isfinite(run.energy))
        throw std::invalid_argument("minimize: infeasible start field");

    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    std::vector<double> g = grad_at(run.dofs);

    int iter = 0;
    for (; iter < opts.max_iters; ++iter) {
        run.diag.grad_norm = max_norm(g);
        if (run.diag.grad_norm <= opts.grad_tol) {
            run.diag.converged = true;
            break;
        }

        // Two-loop recursion.
        std::vector<double> d(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) d[i] = -g[i];
        std::vector<double> alpha(s_hist.size());
        for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
            alpha[i] = rho_hist[i] * dot(s_hist[i], d);
            for (std::size_t j = 0; j < d.size(); ++j) d[j] -= alpha[i] * y_hist[i][j];
        }
        if (!s_hist.empty()) {
            const double gamma = dot(s_hist.back(), y_hist.back()) /
                                 dot(y_hist.back(), y_hist.back());
            for (double& v : d) v *= gamma;
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * dot(y_hist[i], d);
            for (std::size_t j = 0; j < d.size(); ++j)
                d[j] += (alpha[i] - beta) * s_hist[i][j];
        }

        double slope = dot(g, d);
        if (!(slope < 0.0)) {  // not a descent direction: reset memory
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            for (std::size_t i = 0; i < g.size(); ++i) d[i] = -g[i];
            slope = -dot(g, g);
        }

        // Armijo backtracking; infeasible trials count as barrier hits.
        double step = 1.0;
        std::vector<double> trial(run.dofs.size());
        double trial_energy = kInf;
        bool accepted = false;
        while (step > 1e-18) {
            for (std::size_t i = 0; i < trial.size(); ++i)
                trial[i] = run.dofs[i] + step * d[i];
            trial_energy = energy_at(trial);
            if (!std::isfinite(trial_energy)) {
                ++run.diag.barrier_rejections;
            } else if (trial_energy <= run.energy + opts.armijo * step * slope) {
                accepted = true;
                break;
            }
            step *= opts.backtrack;
        }
        if (!accepted) break;  // stalled: gradient tolerance not reachable here

        std::vector<double> g_new = grad_at(trial);
        std::vector<double> s(run.dofs.size()), y(run.dofs.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            s[i] = trial[i] - run.dofs[i];
            y[i] = g_new[i] - g[i];
        }
        const double sy = dot(s, y);
        if (sy > 1e-300) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        run.dofs = std::move(trial);
        run.energy = trial_energy;
        g = std::move(g_new);
    }
    run.diag.iterations = iter;
    run.diag.grad_norm = max_norm(g);
    run.diag.converged = run.diag.grad_norm <= opts.grad_tol;
    run.diag.energy = run.energy;
    return run;
}

}  // namespace

SolveResult minimize(const Mat2& xi, const EnergyDensity& density,
                     const CellMesh& mesh, const SolverOptions& opts,
                     const std::vector<DisplacementField>& warm_starts) {
    if (!density.in_domain(xi))
        throw std::invalid_argument("minimize: xi outside the effective domain");
    if (opts.multistart < 1)
        throw std::invalid_argument("minimize: multistart must be >= 1");

    DisplacementField probe(mesh);
    const std::size_t ndof = 2 * probe.free_nodes().size();

    std::vector<std::vector<double>> starts;
    starts.emplace_back(ndof, 0.0);
    for (const auto& w : warm_starts) {
        if (&w.mesh() != &mesh && (w.mesh().num_nodes() != mesh.num_nodes() ||
                                   w.mesh().nx() != mesh.nx() || w.mesh().ny() != mesh.ny()))
            throw std::invalid_argument("minimize: warm start on a different mesh");
        starts.push_back(w.pack_free());
    }
    for (int r = 1; r < opts.multistart; ++r) {
        std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(r));
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<double> x(ndof);
        double scale = opts.perturbation;
        for (double& v : x) v = noise(rng);
        // Shrink until the perturbed start is feasible (the set is open).
        DisplacementField f(mesh);
        for (int tries = 0; tries < 60; ++tries) {
            std::vector<double> scaled(ndof);
            for (std::size_t i = 0; i < ndof; ++i) scaled[i] = scale * x[i];
            f.unpack_free(scaled);
            if (std::isfinite(cell_energy(f, xi, density))) {
                starts.push_back(std::move(scaled));
                break;
            }
            scale *= 0.5;
        }
    }

    // Ties broken by lowest energy, then lowest start index.
    RunOutcome best;
    bool have_best = false;
    int runs = 0;
    for (const auto& s : starts) {
        RunOutcome out = descend(xi, density, mesh, opts, s);
        ++runs;
        if (!have_best || out.energy < best.energy) {
            best = std::move(out);
            have_best = true;
        }
    }
    best.diag.restarts_used = runs;

    SolveResult result{DisplacementField(mesh), best.energy, best.diag};
    result.field.unpack_free(best.dofs);
    return result;
}

}  // namespace cellhom
