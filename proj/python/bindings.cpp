#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cellhom/harness.hpp"

namespace py = pybind11;
using namespace cellhom;

namespace {

Mat2 mat_from_tuple(const std::array<double, 4>& v) {
    return {v[0], v[1], v[2], v[3]};
}

std::array<double, 4> mat_to_tuple(const Mat2& m) {
    return {m.a11, m.a12, m.a21, m.a22};
}

}  // namespace

PYBIND11_MODULE(_cellhom, m) {
    m.doc() = "cell-problem homogenization of extended-real energy densities";

    py::class_<Mat2>(m, "Mat2")
        .def(py::init([](double a11, double a12, double a21, double a22) {
                 return Mat2{a11, a12, a21, a22};
             }),
             py::arg("a11"), py::arg("a12"), py::arg("a21"), py::arg("a22"))
        .def_readwrite("a11", &Mat2::a11)
        .def_readwrite("a12", &Mat2::a12)
        .def_readwrite("a21", &Mat2::a21)
        .def_readwrite("a22", &Mat2::a22)
        .def("__repr__", [](const Mat2& m2) {
            return "Mat2(" + std::to_string(m2.a11) + ", " + std::to_string(m2.a12) +
                   ", " + std::to_string(m2.a21) + ", " + std::to_string(m2.a22) + ")";
        });

    m.def("det2", &det2);
    m.def("cof2", &cof2);
    m.def("mixed_det", &mixed_det);
    m.def("frobenius", &frobenius);

    m.def("h_eval", &h_eval);
    m.def("in_G", &in_G);
    m.def("g_eval", &g_eval);
    m.def("G_eval", &G_eval, py::arg("xi"), py::arg("p") = 4.0);
    m.def("phi_eval",
          [](double x1, double x2, const Mat2& xi, double p) {
              return phi_eval(Vec2{x1, x2}, xi, p);
          },
          py::arg("x1"), py::arg("x2"), py::arg("xi"), py::arg("p") = 4.0);
    m.def("W_eval",
          [](double x1, double x2, const Mat2& xi, double p) {
              return W_eval(Vec2{x1, x2}, xi, p);
          },
          py::arg("x1"), py::arg("x2"), py::arg("xi"), py::arg("p") = 4.0);
    m.def("grad_W",
          [](double x1, double x2, const Mat2& xi, double p) {
              return mat_to_tuple(grad_W(Vec2{x1, x2}, xi, p));
          },
          py::arg("x1"), py::arg("x2"), py::arg("xi"), py::arg("p") = 4.0);
    m.def("boundary_ray", [](const Mat2& d) { return boundary_ray(d); });

    m.def(
        "hW",
        [](const std::array<double, 4>& xi, const std::string& integrand,
           const std::vector<int>& k_list, int N, std::uint64_t seed) {
            const auto density = make_density(integrand);
            GridSchedule grid;
            for (int k : k_list) grid.n_for_k[k] = N;
            SolverOptions opts;
            opts.seed = seed;
            const HomogRecord rec = hW(mat_from_tuple(xi), *density, k_list, grid, opts);
            py::dict out;
            out["hW"] = rec.hw;
            py::list cells;
            for (const auto& c : rec.cells) {
                py::dict cell;
                cell["k"] = c.k;
                cell["N"] = c.N;
                cell["density"] = c.density;
                cell["converged"] = c.diagnostics.converged;
                cells.append(cell);
            }
            out["cells"] = cells;
            return out;
        },
        py::arg("xi"), py::arg("integrand") = "W",
        py::arg("k_list") = std::vector<int>{1, 2}, py::arg("N") = 4,
        py::arg("seed") = 0,
        "Multi-cell homogenized density min_k S_xi(kY)/k^2.");

    m.def(
        "radial_extension",
        [](const std::array<double, 4>& xi, const std::string& integrand,
           const std::vector<double>& t_list, const std::vector<int>& k_list, int N,
           std::uint64_t seed) {
            const auto density = make_density(integrand);
            GridSchedule grid;
            for (int k : k_list) grid.n_for_k[k] = N;
            SolverOptions opts;
            opts.seed = seed;
            const HomogRecord rec = radial_extension(
                mat_from_tuple(xi), *density,
                t_list.empty() ? default_t_list() : t_list, k_list, grid, opts);
            py::dict out;
            py::list trace;
            for (const auto& pt : rec.radial_trace) {
                trace.append(py::make_tuple(pt.t, pt.hw));
            }
            out["trace"] = trace;
            out["hW_hat"] = rec.hw_hat;
            out["stabilization_gap"] = rec.stabilization_gap;
            return out;
        },
        py::arg("xi"), py::arg("integrand") = "W",
        py::arg("t_list") = std::vector<double>{}, py::arg("k_list") = std::vector<int>{1},
        py::arg("N") = 4, py::arg("seed") = 0);

    m.def(
        "quasiconvexify_point",
        [](const std::array<double, 4>& xi, const std::string& integrand, double x1,
           double x2, int N, std::uint64_t seed) {
            const auto density = make_density(integrand);
            SolverOptions opts;
            opts.seed = seed;
            return quasiconvexify_point(*density, Vec2{x1, x2}, mat_from_tuple(xi), N,
                                        opts);
        },
        py::arg("xi"), py::arg("integrand") = "doublewell", py::arg("x1") = 0.0,
        py::arg("x2") = 0.0, py::arg("N") = 8, py::arg("seed") = 0);

    m.def("verify_structure", [](std::uint64_t seed) {
        StructureOptions opts;
        opts.seed = seed;
        const Report rep = verify_structure(opts);
        py::list checks;
        for (const auto& c : rep.checks) {
            py::dict d;
            d["name"] = c.name;
            d["passed"] = c.passed;
            d["observed"] = c.observed;
            d["bound"] = c.bound;
            d["note"] = c.note;
            checks.append(d);
        }
        py::dict out;
        out["all_passed"] = rep.all_passed();
        out["checks"] = checks;
        return out;
    }, py::arg("seed") = 0);
}
