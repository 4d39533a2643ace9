#include "cellhom/fem_cell.hpp"

#include <cmath>
#include <stdexcept>

namespace cellhom {

namespace {

double frac01(double v) { return v - std::floor(v); }

// Local vertices of triangle type l in the unit cell scaled by h:
// corners 0..3 counter-clockwise from the lower-left, centroid last.
std::array<Vec2, 3> local_triangle(int type, double h) {
    const Vec2 corners[4] = {{0.0, 0.0}, {h, 0.0}, {h, h}, {0.0, h}};
    const Vec2 m{0.5 * h, 0.5 * h};
    return {corners[type], corners[(type + 1) % 4], m};
}

std::array<Vec2, 3> p1_shape_gradients(const std::array<Vec2, 3>& p) {
    const double e11 = p[1].x - p[0].x, e12 = p[2].x - p[0].x;
    const double e21 = p[1].y - p[0].y, e22 = p[2].y - p[0].y;
    const double det = e11 * e22 - e12 * e21;
    const Vec2 g1{e22 / det, -e12 / det};
    const Vec2 g2{-e21 / det, e11 / det};
    const Vec2 g0{-g1.x - g2.x, -g1.y - g2.y};
    return {g0, g1, g2};
}

}  // namespace

CellMesh::CellMesh(double ox, double oy, int nx, int ny, int N)
    : ox_(ox), oy_(oy), nx_(nx), ny_(ny), N_(N), h_(1.0 / N) {
    for (int t = 0; t < 4; ++t) shape_grads_[t] = p1_shape_gradients(local_triangle(t, h_));
}

CellMesh CellMesh::unit_block(int k, int N) {
    if (k < 1) throw std::invalid_argument("build_mesh: k must be >= 1");
    if (N < 2) throw std::invalid_argument("build_mesh: N must be >= 2");
    return CellMesh(0.0, 0.0, k * N, k * N, N);
}

CellMesh CellMesh::over_rect(const Rect& r, int N) {
    if (N < 2) throw std::invalid_argument("over_rect: N must be >= 2");
    const double w = r.width(), h = r.height();
    if (!(w > 0.0) || !(h > 0.0)) throw std::invalid_argument("over_rect: empty rectangle");
    const int nx = static_cast<int>(std::lround(w * N));
    const int ny = static_cast<int>(std::lround(h * N));
    const double tol = 1e-9;
    if (std::fabs(nx - w * N) > tol || std::fabs(ny - h * N) > tol ||
        std::fabs(r.x0 * N - std::lround(r.x0 * N)) > tol ||
        std::fabs(r.y0 * N - std::lround(r.y0 * N)) > tol)
        throw std::invalid_argument("over_rect: corners must lie on the (1/N)-lattice");
    return CellMesh(frac01(r.x0), frac01(r.y0), nx, ny, N);
}

bool CellMesh::is_boundary_node(int node) const {
    if (node >= num_lattice_nodes()) return false;  // centroids are interior
    const int i = node % (nx_ + 1);
    const int j = node / (nx_ + 1);
    return i == 0 || i == nx_ || j == 0 || j == ny_;
}

Vec2 CellMesh::node_position(int node) const {
    if (node < num_lattice_nodes()) {
        const int i = node % (nx_ + 1);
        const int j = node / (nx_ + 1);
        return {ox_ + i * h_, oy_ + j * h_};
    }
    const int c = node - num_lattice_nodes();
    const int ci = c % nx_;
    const int cj = c / nx_;
    return {ox_ + (ci + 0.5) * h_, oy_ + (cj + 0.5) * h_};
}

std::array<int, 3> CellMesh::element_nodes(int t) const {
    const int cell = t / 4;
    const int type = t % 4;
    const int ci = cell % nx_;
    const int cj = cell / nx_;
    const int corners[4] = {lattice_node(ci, cj), lattice_node(ci + 1, cj),
                            lattice_node(ci + 1, cj + 1), lattice_node(ci, cj + 1)};
    return {corners[type], corners[(type + 1) % 4], centroid_node(ci, cj)};
}

Vec2 CellMesh::element_barycenter(int t) const {
    const auto nodes = element_nodes(t);
    const Vec2 p0 = node_position(nodes[0]);
    const Vec2 p1 = node_position(nodes[1]);
    const Vec2 p2 = node_position(nodes[2]);
    return {(p0.x + p1.x + p2.x) / 3.0, (p0.y + p1.y + p2.y) / 3.0};
}

DisplacementField::DisplacementField(const CellMesh& mesh)
    : mesh_(mesh), values_(mesh.num_nodes()) {
    for (int n = 0; n < mesh.num_nodes(); ++n)
        if (!mesh.is_boundary_node(n)) free_nodes_.push_back(n);
}

void DisplacementField::set_value(int node, const Vec2& v) {
    if (mesh_.is_boundary_node(node))
        throw std::invalid_argument("DisplacementField: boundary nodes are pinned to zero");
    values_[node] = v;
}

void DisplacementField::zero_boundary() {
    for (int n = 0; n < mesh_.num_nodes(); ++n)
        if (mesh_.is_boundary_node(n)) values_[n] = Vec2{};
}

std::vector<double> DisplacementField::pack_free() const {
    std::vector<double> dofs;
    dofs.reserve(2 * free_nodes_.size());
    for (int n : free_nodes_) {
        dofs.push_back(values_[n].x);
        dofs.push_back(values_[n].y);
    }
    return dofs;
}

void DisplacementField::unpack_free(const std::vector<double>& dofs) {
    if (dofs.size() != 2 * free_nodes_.size())
        throw std::invalid_argument("unpack_free: size mismatch");
    for (std::size_t i = 0; i < free_nodes_.size(); ++i)
        values_[free_nodes_[i]] = {dofs[2 * i], dofs[2 * i + 1]};
}

CellMesh build_mesh(int k, int N) { return CellMesh::unit_block(k, N); }

namespace {

Mat2 triangle_gradient(const CellMesh& mesh, const std::vector<Vec2>& u, int t) {
    const auto nodes = mesh.element_nodes(t);
    const auto& g = mesh.shape_gradients()[t % 4];
    Mat2 grad{};
    for (int v = 0; v < 3; ++v) {
        const Vec2& uv = u[nodes[v]];
        grad.a11 += uv.x * g[v].x;
        grad.a12 += uv.x * g[v].y;
        grad.a21 += uv.y * g[v].x;
        grad.a22 += uv.y * g[v].y;
    }
    return grad;
}

}  // namespace

std::vector<ElementGradient> element_gradients(const DisplacementField& field) {
    const CellMesh& mesh = field.mesh();
    std::vector<ElementGradient> out;
    out.reserve(mesh.num_elements());
    for (int t = 0; t < mesh.num_elements(); ++t)
        out.push_back({mesh.element_barycenter(t),
                       triangle_gradient(mesh, field.values(), t)});
    return out;
}

double cell_energy(const DisplacementField& field, const Mat2& xi,
                   const EnergyDensity& density) {
    const CellMesh& mesh = field.mesh();
    const double area = mesh.element_area();
    double total = 0.0;
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const Mat2 a = xi + triangle_gradient(mesh, field.values(), t);
        if (!density.in_domain(a)) return kInf;
        const double w = density.eval(mesh.element_barycenter(t), a);
        if (!std::isfinite(w)) return kInf;
        total += area * w;
    }
    return total;
}

std::vector<Vec2> cell_energy_gradient(const DisplacementField& field,
                                       const Mat2& xi,
                                       const EnergyDensity& density) {
    const CellMesh& mesh = field.mesh();
    const double area = mesh.element_area();
    std::vector<Vec2> grad(mesh.num_nodes());
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const Mat2 a = xi + triangle_gradient(mesh, field.values(), t);
        if (!density.in_domain(a))
            throw std::runtime_error("cell_energy_gradient: infeasible field");
        const Mat2 dw = density.grad_xi(mesh.element_barycenter(t), a);
        const auto nodes = mesh.element_nodes(t);
        const auto& g = mesh.shape_gradients()[t % 4];
        for (int v = 0; v < 3; ++v) {
            grad[nodes[v]].x += area * (dw.a11 * g[v].x + dw.a12 * g[v].y);
            grad[nodes[v]].y += area * (dw.a21 * g[v].x + dw.a22 * g[v].y);
        }
    }
    for (int n = 0; n < mesh.num_nodes(); ++n)
        if (mesh.is_boundary_node(n)) grad[n] = Vec2{};
    return grad;
}

}  // namespace cellhom
