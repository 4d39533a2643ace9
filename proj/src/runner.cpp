#include "cellhom/runner.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cellhom/harness.hpp"
#include "cellhom/result_store.hpp"

namespace cellhom {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fd(double v) { return format_double(v); }

json mat_json(const Mat2& m) { return json::array({m.a11, m.a12, m.a21, m.a22}); }

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

// Config slice that determines the results; output directory and parallelism
// do not belong in the cache key.
std::string cache_slice(ExperimentConfig cfg) {
    cfg.out = "";
    cfg.jobs = 1;
    return save_config(cfg);
}

// Deterministic parallel map: results land in preallocated slots.
template <typename Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

struct CommandOutput {
    std::string csv;
    json records = json::array();
    std::string summary;
    int status = 0;
};

const char* kHomogSchema =
    "# schema=cellhom.homog.v1 columns=xi11,xi12,xi21,xi22,k,N,density,converged,t,hW,hW_hat\n";

void append_homog_row(std::string& csv, const Mat2& xi, const std::string& k,
                      const std::string& N, const std::string& density,
                      const std::string& converged, const std::string& t,
                      const std::string& hw, const std::string& hw_hat) {
    csv += fd(xi.a11) + "," + fd(xi.a12) + "," + fd(xi.a21) + "," + fd(xi.a22) + "," +
           k + "," + N + "," + density + "," + converged + "," + t + "," + hw + "," +
           hw_hat + "\n";
}

CommandOutput cmd_eval(const ExperimentConfig& cfg) {
    CommandOutput out;
    out.csv = "# schema=cellhom.eval.v1 columns=xi11,xi12,xi21,xi22,in_G,g,G,W00\n";
    const Vec2 x0{0.0, 0.0};
    for (const Mat2& xi : cfg.resolve_xis()) {
        const bool member = in_G(xi);
        const double g = g_eval(xi);
        const double G = G_eval(xi, cfg.p);
        const double w = W_eval(x0, xi, cfg.p);
        out.csv += fd(xi.a11) + "," + fd(xi.a12) + "," + fd(xi.a21) + "," +
                   fd(xi.a22) + "," + (member ? "1" : "0") + "," + fd(g) + "," +
                   fd(G) + "," + fd(w) + "\n";
        out.records.push_back({{"xi", mat_json(xi)},
                               {"in_G", member},
                               {"g", g},
                               {"G", G},
                               {"W00", w}});
    }
    out.summary = std::to_string(out.records.size()) + " xi rows evaluated";
    return out;
}

CommandOutput cmd_cell(const ExperimentConfig& cfg) {
    CommandOutput out;
    out.csv =
        "# schema=cellhom.cell.v1 "
        "columns=xi11,xi12,xi21,xi22,k,N,energy,density,converged,iterations,grad_norm\n";
    const auto density_fn = make_density(cfg.integrand_id, cfg.p);
    const GridSchedule grid = cfg.grid_schedule();
    SolverOptions sopts = cfg.solver;
    sopts.seed = cfg.seed;
    const int k = cfg.k_list.front();
    const int N = grid.at(k);
    for (const Mat2& xi : cfg.resolve_xis()) {
        json rec{{"xi", mat_json(xi)}, {"k", k}, {"N", N}};
        if (!density_fn->in_domain(xi)) {
            rec["error"] = "infeasible xi";
            out.records.push_back(rec);
            out.csv += fd(xi.a11) + "," + fd(xi.a12) + "," + fd(xi.a21) + "," +
                       fd(xi.a22) + "," + std::to_string(k) + "," + std::to_string(N) +
                       ",,,0,,\n";
            continue;
        }
        const Rect rect{0, 0, static_cast<double>(k), static_cast<double>(k)};
        const SolveResult res = S_xi(xi, rect, *density_fn, N, sopts);
        rec["energy"] = res.energy;
        rec["density"] = res.energy / (static_cast<double>(k) * k);
        rec["converged"] = res.diagnostics.converged;
        rec["iterations"] = res.diagnostics.iterations;
        rec["grad_norm"] = res.diagnostics.grad_norm;
        out.records.push_back(rec);
        out.csv += fd(xi.a11) + "," + fd(xi.a12) + "," + fd(xi.a21) + "," +
                   fd(xi.a22) + "," + std::to_string(k) + "," + std::to_string(N) +
                   "," + fd(res.energy) + "," +
                   fd(res.energy / (static_cast<double>(k) * k)) + "," +
                   (res.diagnostics.converged ? "1" : "0") + "," +
                   std::to_string(res.diagnostics.iterations) + "," +
                   fd(res.diagnostics.grad_norm) + "\n";
    }
    out.summary = "cell problems solved: " + std::to_string(out.records.size());
    return out;
}

CommandOutput cmd_homogenize(const ExperimentConfig& cfg, int jobs) {
    CommandOutput out;
    out.csv = kHomogSchema;
    const GridSchedule grid = cfg.grid_schedule();
    SolverOptions sopts = cfg.solver;
    sopts.seed = cfg.seed;
    const std::vector<Mat2> xis = cfg.resolve_xis();

    struct Row {
        json rec;
        std::string csv;
    };
    std::vector<Row> rows(xis.size());
    const auto worker = [&](int i) {
        const auto density_fn = make_density(cfg.integrand_id, cfg.p);
        const Mat2& xi = xis[i];
        Row& row = rows[i];
        if (!density_fn->in_domain(xi)) {
            row.rec = {{"xi", mat_json(xi)}, {"error", "infeasible xi"}};
            append_homog_row(row.csv, xi, "", "", "", "0", "", "", "");
            return;
        }
        const HomogRecord rec = hW(xi, *density_fn, cfg.k_list, grid, sopts);
        json cells = json::array();
        for (const auto& c : rec.cells) {
            cells.push_back({{"k", c.k},
                             {"N", c.N},
                             {"density", c.density},
                             {"converged", c.diagnostics.converged},
                             {"iterations", c.diagnostics.iterations}});
            append_homog_row(row.csv, xi, std::to_string(c.k), std::to_string(c.N),
                             fd(c.density), c.diagnostics.converged ? "1" : "0", "",
                             fd(rec.hw), "");
        }
        row.rec = {{"xi", mat_json(xi)}, {"cells", cells}, {"hW", rec.hw}};
    };
    parallel_for(static_cast<int>(xis.size()), jobs, worker);
    for (auto& row : rows) {
        out.csv += row.csv;
        out.records.push_back(std::move(row.rec));
    }
    out.summary = "homogenized " + std::to_string(xis.size()) + " xi points";
    return out;
}

CommandOutput cmd_radial(const ExperimentConfig& cfg) {
    CommandOutput out;
    out.csv = kHomogSchema;
    const auto density_fn = make_density(cfg.integrand_id, cfg.p);
    const GridSchedule grid = cfg.grid_schedule();
    SolverOptions sopts = cfg.solver;
    sopts.seed = cfg.seed;

    std::vector<Mat2> targets;
    if (cfg.xi_mode == "ray") {
        const double s = boundary_ray(cfg.ray_direction);
        if (!std::isfinite(s))
            throw std::runtime_error("radial: ray never leaves the effective domain");
        targets.push_back(s * cfg.ray_direction);
    } else {
        targets = cfg.resolve_xis();
    }

    for (const Mat2& xi : targets) {
        json rec{{"xi", mat_json(xi)}};
        try {
            const HomogRecord r = radial_extension(xi, *density_fn, cfg.t_list,
                                                   cfg.k_list, grid, sopts);
            json trace = json::array();
            for (const auto& pt : r.radial_trace) {
                trace.push_back({{"t", pt.t}, {"hW", pt.hw}});
                append_homog_row(out.csv, xi, "", "", fd(pt.hw), "1", fd(pt.t),
                                 std::isfinite(r.hw) ? fd(r.hw) : "", fd(r.hw_hat));
            }
            rec["trace"] = trace;
            rec["hW_hat"] = r.hw_hat;
            rec["stabilization_gap"] = r.stabilization_gap;
            if (std::isfinite(r.hw)) rec["hW"] = r.hw;
        } catch (const std::invalid_argument& e) {
            rec["error"] = e.what();
            append_homog_row(out.csv, xi, "", "", "", "0", "", "", "");
        }
        out.records.push_back(rec);
    }
    out.summary = "radial sweeps: " + std::to_string(targets.size());
    return out;
}

CommandOutput cmd_delta(const ExperimentConfig& cfg) {
    CommandOutput out;
    out.csv =
        "# schema=cellhom.delta.v1 "
        "columns=t,delta_g,bound_g,delta_phi,delta_w,delta_w_bound,delta_hw\n";
    RuUscOptions opts;
    opts.t_values = cfg.delta_t;
    opts.samples = cfg.delta_samples;
    opts.seed = cfg.seed;
    opts.k_list = cfg.k_list;
    opts.grid = cfg.grid_schedule();
    opts.solver = cfg.solver;
    opts.solver.seed = cfg.seed;
    opts.include_hw = true;
    for (const Mat2& xi : cfg.resolve_xis())
        if (in_G(xi)) opts.hw_grid.push_back(xi);
    const RuUscReport rep = ru_usc_suite(opts);
    for (const auto& row : rep.rows) {
        out.csv += fd(row.t) + "," + fd(row.delta_g) + "," + fd(row.bound_g) + "," +
                   fd(row.delta_phi) + "," + fd(row.delta_w) + "," +
                   fd(row.delta_w_bound) + "," +
                   (std::isnan(row.delta_hw) ? "" : fd(row.delta_hw)) + "\n";
        out.records.push_back({{"t", row.t},
                               {"delta_g", row.delta_g},
                               {"bound_g", row.bound_g},
                               {"delta_phi", row.delta_phi},
                               {"delta_w", row.delta_w},
                               {"delta_w_bound", row.delta_w_bound},
                               {"delta_hw", row.delta_hw}});
    }
    out.summary = std::string("ru-usc bounds ") +
                  (rep.bounds_hold ? "hold" : "VIOLATED") + "; moduli " +
                  (rep.monotone_to_zero ? "decrease toward 0" : "NOT monotone");
    if (!rep.bounds_hold) out.status = 2;
    return out;
}

CommandOutput cmd_verify(const ExperimentConfig& cfg) {
    CommandOutput out;
    out.csv = "# schema=cellhom.verify.v1 columns=check,passed,observed,bound,note\n";
    StructureOptions opts;
    opts.seed = cfg.seed;
    const Report rep = verify_structure(opts);
    std::ostringstream text;
    for (const auto& c : rep.checks) {
        out.csv += "\"" + c.name + "\"," + (c.passed ? "1" : "0") + "," +
                   fd(c.observed) + "," + fd(c.bound) + ",\"" + c.note + "\"\n";
        out.records.push_back({{"check", c.name},
                               {"passed", c.passed},
                               {"observed", c.observed},
                               {"bound", c.bound},
                               {"note", c.note}});
        text << (c.passed ? "PASS  " : "FAIL  ") << c.name;
        if (!c.note.empty()) text << "  (" << c.note << ")";
        text << "\n";
    }
    out.summary = text.str() + (rep.all_passed() ? "all checks passed" : "FAILURES present");
    if (!rep.all_passed()) out.status = 2;
    return out;
}

CommandOutput cmd_gamma(const ExperimentConfig& cfg) {
    CommandOutput out;
    out.csv =
        "# schema=cellhom.gamma.v1 "
        "columns=xi11,xi12,xi21,xi22,eps,density,hW,hW_hat,gap_eps,gap_hat\n";
    const auto density_fn = make_density(cfg.integrand_id, cfg.p);
    const GridSchedule grid = cfg.grid_schedule();
    SolverOptions sopts = cfg.solver;
    sopts.seed = cfg.seed;
    for (const Mat2& xi : cfg.resolve_xis()) {
        json rec{{"xi", mat_json(xi)}};
        if (!density_fn->in_domain(xi)) {
            rec["error"] = "infeasible xi";
            out.records.push_back(rec);
            continue;
        }
        const GammaDiagnostic d =
            gamma_diagnostic(xi, *density_fn, cfg.eps_list, cfg.k_list, grid, sopts);
        json sweep = json::array();
        for (const auto& [eps, dens] : d.eps_densities) {
            sweep.push_back({{"eps", eps}, {"density", dens}});
            out.csv += fd(xi.a11) + "," + fd(xi.a12) + "," + fd(xi.a21) + "," +
                       fd(xi.a22) + "," + fd(eps) + "," + fd(dens) + "," + fd(d.hw) +
                       "," + fd(d.hw_hat) + "," + fd(d.gap_eps_vs_hw) + "," +
                       fd(d.gap_hw_hat_vs_hw) + "\n";
        }
        rec["sweep"] = sweep;
        rec["hW"] = d.hw;
        rec["hW_hat"] = d.hw_hat;
        rec["gap_eps_vs_hW"] = d.gap_eps_vs_hw;
        rec["gap_hW_hat_vs_hW"] = d.gap_hw_hat_vs_hw;
        out.records.push_back(rec);
    }
    out.summary = "gamma diagnostics: " + std::to_string(out.records.size()) + " xi points";
    return out;
}

CommandOutput cmd_qcx(const ExperimentConfig& cfg) {
    CommandOutput out;
    out.csv = "# schema=cellhom.qcx.v1 columns=xi11,xi12,xi21,xi22,f,qcx\n";
    const auto density_fn = make_density(cfg.integrand_id, cfg.p);
    const GridSchedule grid = cfg.grid_schedule();
    SolverOptions sopts = cfg.solver;
    sopts.seed = cfg.seed;
    const Vec2 x0{0.0, 0.0};
    const int N = grid.at(1);
    for (const Mat2& xi : cfg.resolve_xis()) {
        json rec{{"xi", mat_json(xi)}};
        if (!density_fn->in_domain(xi)) {
            rec["error"] = "infeasible xi";
            out.records.push_back(rec);
            out.csv += fd(xi.a11) + "," + fd(xi.a12) + "," + fd(xi.a21) + "," +
                       fd(xi.a22) + ",,\n";
            continue;
        }
        const double f = density_fn->eval(x0, xi);
        const double q = quasiconvexify_point(*density_fn, x0, xi, N, sopts);
        rec["f"] = f;
        rec["qcx"] = q;
        out.records.push_back(rec);
        out.csv += fd(xi.a11) + "," + fd(xi.a12) + "," + fd(xi.a21) + "," +
                   fd(xi.a22) + "," + fd(f) + "," + fd(q) + "\n";
    }
    out.summary = "quasiconvexified " + std::to_string(out.records.size()) + " points";
    return out;
}

}  // namespace

int run_command(const std::string& command, ExperimentConfig cfg,
                const RunFlags& flags, std::ostream& log) {
    if (flags.out) cfg.out = *flags.out;
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.jobs) cfg.jobs = *flags.jobs;

    ResultStore store(cfg.out);
    const std::string slice = cache_slice(cfg);

    if (!flags.no_cache) {
        if (auto hit = store.lookup(command, slice)) {
            log << command << ": cache hit at " << hit->string() << "\n";
            return 0;
        }
    }

    CommandOutput out;
    try {
        if (command == "eval") out = cmd_eval(cfg);
        else if (command == "cell") out = cmd_cell(cfg);
        else if (command == "homogenize") out = cmd_homogenize(cfg, cfg.jobs);
        else if (command == "radial") out = cmd_radial(cfg);
        else if (command == "delta") out = cmd_delta(cfg);
        else if (command == "verify") out = cmd_verify(cfg);
        else if (command == "gamma") out = cmd_gamma(cfg);
        else if (command == "qcx") out = cmd_qcx(cfg);
        else {
            log << "unknown command '" << command << "'\n";
            return 1;
        }
    } catch (const std::exception& e) {
        log << command << ": error: " << e.what() << "\n";
        return 1;
    }

    const fs::path dir = store.entry_dir(command, slice);
    write_file(dir / "results.csv", out.csv);
    std::string json_lines;
    for (const auto& rec : out.records) json_lines += rec.dump() + "\n";
    write_file(dir / "results.json", json_lines);
    store.mark_done(dir);
    store.record_label(dir, command + " seed=" + std::to_string(cfg.seed));

    log << out.summary << "\n";
    log << "artifacts: " << (dir / "results.csv").string() << "\n";
    return out.status;
}

}  // namespace cellhom
