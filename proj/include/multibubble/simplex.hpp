// Geometry of the simplex tangent space E = { x in R^q : sum_i x_i = 0 }.
//
// Vectors in E are stored in ambient R^q coordinates with exact mean-zero
// enforced at construction. Operators on E are stored as symmetric q x q
// matrices annihilating the ones vector.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "multibubble/errors.hpp"

namespace multibubble {

// A shift vector x in E; the model cluster with shift x has cells
// { z : argmax_j (z_j - x_j) = i }.
struct SimplexShift {
    Eigen::VectorXd coords;

    explicit SimplexShift(Eigen::VectorXd c);
    static SimplexShift zero(int q) { return SimplexShift(Eigen::VectorXd::Zero(q)); }
    int q() const { return static_cast<int>(coords.size()); }
};

// A probability vector of cell measures. Accepts input whose sum is within
// 1e-9 of one and stores the exactly renormalized vector.
struct MeasureVector {
    Eigen::VectorXd v;

    explicit MeasureVector(Eigen::VectorXd raw);
    int q() const { return static_cast<int>(v.size()); }
    bool strictly_interior(double eps = 1e-12) const { return v.minCoeff() > eps; }
};

// Symmetric operator on E: q x q matrix, symmetric and with zero row sums
// (both within 1e-10, checked at construction).
struct EOperator {
    Eigen::MatrixXd m;

    explicit EOperator(Eigen::MatrixXd raw);
    int q() const { return static_cast<int>(m.rows()); }
    double quad_form(const Eigen::VectorXd& a) const { return a.dot(m * a); }
};

// Symmetric nonnegative table of pairwise interface areas with zero diagonal.
struct InterfaceAreaTable {
    int q;
    Eigen::MatrixXd a;

    InterfaceAreaTable(int q_, Eigen::MatrixXd areas);
    double total() const;                              // sum over unordered pairs
    std::vector<std::pair<int, int>> edges(double threshold = 0.0) const;
    bool is_connected(double threshold = 0.0) const;   // graph on edges > threshold
};

// Orthogonal projection of an ambient vector onto E (subtract the mean).
SimplexShift project_to_E(const Eigen::VectorXd& w);

// Graph Laplacian L_A = sum_{i<j} A_ij (e_i - e_j)(e_i - e_j)^T.
EOperator build_LA(const InterfaceAreaTable& areas);
EOperator build_LA(const Eigen::MatrixXd& weights);

// Pseudo-inverse of a PSD operator on E with relative eigenvalue cutoff
// 1e-10; rank counts eigenvalues above the cutoff, and the operator is
// degenerate when that rank falls below dim E = q - 1.
struct PinvOnE {
    EOperator pinv;
    int rank;
    bool degenerate;
};
PinvOnE pinv_on_E(const EOperator& op);

// Orthonormal rows spanning E (Helmert construction), (q-1) x q.
Eigen::MatrixXd e_basis(int q);

// q points in R^n (columns) with all pairwise distances sqrt(2), centered at
// the origin and spanning a (q-1)-dimensional subspace: the isometric image
// of e_1..e_q - centroid.
Eigen::MatrixXd equidistant_points(int q, int n);

// Frames of the two singular cones: Y = three coplanar half-lines at 120
// degrees (q = 3), T = four half-lines at arccos(-1/3) (q = 4). Column l is
// (ones - q e_l) / sqrt(q (q-1)), a unit vector in E.
enum class ConeKind { Y, T };
Eigen::MatrixXd cone_frame(ConeKind kind);

// Result of locating a point relative to a shifted model partition. When the
// argmax of z - x is unique up to the tie tolerance, `cell` holds its index
// and `tied` is empty; otherwise `cell` is empty and `tied` lists every index
// within tolerance of the maximum.
struct CellMembership {
    std::optional<int> cell;
    std::vector<int> tied;

    bool on_boundary() const { return !cell.has_value(); }
};

// Membership of z in the model partition with shift x: argmax_i (z_i - x_i),
// with ties detected at absolute tolerance 1e-12.
CellMembership model_cell_membership(const SimplexShift& z, const SimplexShift& x);

}  // namespace multibubble
