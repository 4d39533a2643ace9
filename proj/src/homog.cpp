#include "cellhom/homog.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace cellhom {

SolveResult S_xi(const Mat2& xi, const Rect& rect, const EnergyDensity& density,
                 int N, const SolverOptions& opts,
                 const std::vector<DisplacementField>& warm_starts) {
    const CellMesh mesh = CellMesh::over_rect(rect, N);
    std::vector<DisplacementField> starts;
    starts.reserve(warm_starts.size());
    for (const auto& w : warm_starts) {
        DisplacementField copy(mesh);
        copy.unpack_free(w.pack_free());
        starts.push_back(std::move(copy));
    }
    return minimize(xi, density, mesh, opts, starts);
}

DisplacementField tile_field(const DisplacementField& src, const CellMesh& dst) {
    const CellMesh& sm = src.mesh();
    if (sm.spacing() != dst.spacing() || dst.nx() % sm.nx() != 0 ||
        dst.ny() % sm.ny() != 0)
        throw std::invalid_argument("tile_field: target mesh does not tile the source");
    DisplacementField out(dst);
    const int snx = sm.nx(), sny = sm.ny();
    for (int j = 0; j <= dst.ny(); ++j)
        for (int i = 0; i <= dst.nx(); ++i) {
            const int n = dst.lattice_node(i, j);
            if (dst.is_boundary_node(n)) continue;
            out.set_value(n, src.value(sm.lattice_node(i % snx, j % sny)));
        }
    for (int cj = 0; cj < dst.ny(); ++cj)
        for (int ci = 0; ci < dst.nx(); ++ci)
            out.set_value(dst.centroid_node(ci, cj),
                          src.value(sm.centroid_node(ci % snx, cj % sny)));
    return out;
}

HomogRecord hW(const Mat2& xi, const EnergyDensity& density,
               const std::vector<int>& k_list, const GridSchedule& grid,
               const SolverOptions& opts) {
    if (k_list.empty()) throw std::invalid_argument("hW: empty k_list");
    HomogRecord rec;
    rec.xi = xi;
    rec.hw = kInf;

    // Previous minimizer, reused as a tiled warm start when the k's nest.
    struct Prev {
        DisplacementField field;
        int k;
        int N;
    };
    std::unique_ptr<Prev> prev;

    for (int k : k_list) {
        const int N = grid.at(k);
        const Rect rect{0.0, 0.0, static_cast<double>(k), static_cast<double>(k)};
        std::vector<DisplacementField> starts;
        if (prev && N == prev->N && k % prev->k == 0 && k > prev->k) {
            const CellMesh dst = CellMesh::over_rect(rect, N);
            starts.push_back(tile_field(prev->field, dst));
        }
        SolveResult res = S_xi(xi, rect, density, N, opts, starts);
        CellResult cell;
        cell.xi = xi;
        cell.k = k;
        cell.N = N;
        cell.density = res.energy / (static_cast<double>(k) * k);
        cell.diagnostics = res.diagnostics;
        rec.hw = std::min(rec.hw, cell.density);
        rec.cells.push_back(cell);
        prev = std::make_unique<Prev>(Prev{std::move(res.field), k, N});
    }
    return rec;
}

std::vector<double> default_t_list(int J) {
    std::vector<double> t;
    double step = 0.5;
    for (int j = 1; j <= J; ++j) {
        t.push_back(1.0 - step);
        step *= 0.5;
    }
    return t;
}

HomogRecord radial_extension(const Mat2& xi, const EnergyDensity& density,
                             const std::vector<double>& t_list,
                             const std::vector<int>& k_list,
                             const GridSchedule& grid, const SolverOptions& opts) {
    if (t_list.empty()) throw std::invalid_argument("radial_extension: empty t_list");
    for (std::size_t i = 1; i < t_list.size(); ++i)
        if (!(t_list[i] > t_list[i - 1]))
            throw std::invalid_argument("radial_extension: t_list must increase");
    for (double t : t_list)
        if (!(t >= 0.0 && t < 1.0) || !density.in_domain(t * xi))
            throw std::invalid_argument("radial_extension: t*xi infeasible");

    HomogRecord rec;
    rec.xi = xi;
    rec.hw = kInf;
    for (double t : t_list) {
        HomogRecord at_t = hW(t * xi, density, k_list, grid, opts);
        rec.radial_trace.push_back({t, at_t.hw});
    }
    rec.hw_hat = rec.radial_trace.back().hw;
    rec.stabilization_gap =
        rec.radial_trace.size() > 1
            ? std::fabs(rec.hw_hat - rec.radial_trace[rec.radial_trace.size() - 2].hw)
            : std::numeric_limits<double>::quiet_NaN();
    if (density.in_domain(xi)) rec.hw = hW(xi, density, k_list, grid, opts).hw;
    return rec;
}

double quasiconvexify_point(const EnergyDensity& f, const Vec2& x, const Mat2& xi,
                            int N, const SolverOptions& opts) {
    if (!f.in_domain(xi) || !std::isfinite(f.eval(x, xi)))
        throw std::invalid_argument("quasiconvexify_point: f(x, xi) must be finite");
    const FrozenXDensity frozen(f, x);
    const CellMesh mesh = CellMesh::unit_block(1, N);
    return minimize(xi, frozen, mesh, opts).energy;
}

double delta_estimate(const EnergyDensity& L, double t,
                      const std::vector<std::pair<Vec2, Mat2>>& samples) {
    if (samples.empty()) throw std::invalid_argument("delta_estimate: empty samples");
    if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("delta_estimate: t in [0,1)");
    double sup = -kInf;
    for (const auto& [x, xi] : samples) {
        const double lx = L.eval(x, xi);
        if (!std::isfinite(lx))
            throw std::invalid_argument("delta_estimate: sample outside the domain");
        const double ratio = (L.eval(x, t * xi) - lx) / (L.weight_a(x) + lx);
        sup = std::max(sup, ratio);
    }
    return sup;
}

}  // namespace cellhom
