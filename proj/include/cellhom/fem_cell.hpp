#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cellhom/integrand.hpp"

namespace cellhom {

// Axis-aligned rectangle with corners on the (1/N)-lattice.
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 1.0;
    double y1 = 1.0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
};

// Criss-cross P1 triangulation of a grid-aligned rectangle: each (1/N)-square
// is split into 4 triangles by its centroid, so element gradients are constant
// and the extended-real composition with W is exact per element.
//
// Node numbering: the (nx+1)*(ny+1) lattice points first (row-major, j*(nx+1)+i),
// then the nx*ny centroids.  Only the fractional part of the rectangle origin
// is kept: integrands are 1-periodic in x, so an integer translation of the
// rectangle assembles the bit-identical problem.
class CellMesh {
public:
    // Mesh over (0,k)^2 with N subdivisions per unit length.
    static CellMesh unit_block(int k, int N);
    // Mesh over an arbitrary grid-aligned rectangle.
    static CellMesh over_rect(const Rect& r, int N);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int subdivisions() const { return N_; }
    double spacing() const { return h_; }
    double area() const { return (nx_ * h_) * (ny_ * h_); }

    int num_lattice_nodes() const { return (nx_ + 1) * (ny_ + 1); }
    int num_centroid_nodes() const { return nx_ * ny_; }
    int num_nodes() const { return num_lattice_nodes() + num_centroid_nodes(); }
    int num_elements() const { return 4 * nx_ * ny_; }

    int lattice_node(int i, int j) const { return j * (nx_ + 1) + i; }
    int centroid_node(int ci, int cj) const {
        return num_lattice_nodes() + cj * nx_ + ci;
    }

    bool is_boundary_node(int node) const;
    // Position of a node, with the integer part of the origin dropped.
    Vec2 node_position(int node) const;

    // Element t (0..num_elements-1): cell (t/4), local triangle t%4 with
    // vertices (corner, next corner, centroid), positively oriented.
    std::array<int, 3> element_nodes(int t) const;
    Vec2 element_barycenter(int t) const;
    double element_area() const { return 0.25 * h_ * h_; }

    // Gradients of the three P1 basis functions on local triangle type 0..3;
    // identical across cells (congruent elements).
    const std::array<std::array<Vec2, 3>, 4>& shape_gradients() const {
        return shape_grads_;
    }

private:
    CellMesh(double ox, double oy, int nx, int ny, int N);

    double ox_, oy_;  // fractional origin in [0,1)
    int nx_, ny_, N_;
    double h_;
    std::array<std::array<Vec2, 3>, 4> shape_grads_;
};

// Nodal displacement perturbation on a CellMesh; the discrete stand-in for a
// zero-boundary Sobolev test field.  Boundary lattice nodes are pinned to 0.
class DisplacementField {
public:
    explicit DisplacementField(const CellMesh& mesh);

    const CellMesh& mesh() const { return mesh_; }
    const std::vector<Vec2>& values() const { return values_; }

    Vec2 value(int node) const { return values_[node]; }
    // Rejects writes to boundary nodes.
    void set_value(int node, const Vec2& v);
    // Unchecked write; used by tests that need full nodal assignment.
    void set_value_unchecked(int node, const Vec2& v) { values_[node] = v; }

    void zero_boundary();

    // Free (interior) degrees of freedom, in fixed node order.
    const std::vector<int>& free_nodes() const { return free_nodes_; }
    std::vector<double> pack_free() const;
    void unpack_free(const std::vector<double>& dofs);

private:
    CellMesh mesh_;  // by value: meshes are small and fields outlive call sites
    std::vector<Vec2> values_;
    std::vector<int> free_nodes_;
};

CellMesh build_mesh(int k, int N);

struct ElementGradient {
    Vec2 barycenter;
    Mat2 grad;
};

// Per-element constant gradient of the affine interpolant; exact on affine data.
std::vector<ElementGradient> element_gradients(const DisplacementField& field);

// Sum_T |T| W(x_T, xi + grad_T), fixed element order; +inf as soon as an
// element leaves the effective domain.
double cell_energy(const DisplacementField& field, const Mat2& xi,
                   const EnergyDensity& density);

// Exact gradient of the discrete energy with respect to interior nodal values.
// Throws std::runtime_error if the energy is infinite at the field.
std::vector<Vec2> cell_energy_gradient(const DisplacementField& field,
                                       const Mat2& xi,
                                       const EnergyDensity& density);

}  // namespace cellhom
