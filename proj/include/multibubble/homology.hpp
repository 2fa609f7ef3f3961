// Incidence complex of a cluster (cells, interfaces, triple points), its
// first two Betti numbers over the rationals, and recovery of the defining
// linear map B from an assignment of interface normals.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "multibubble/pullback.hpp"

namespace multibubble {

struct IncidenceComplex {
    int q = 0;
    std::vector<int> vertices;                  // sorted cell indices
    std::vector<std::pair<int, int>> edges;     // i < j, sorted
    std::vector<std::array<int, 3>> triangles;  // i < j < k, sorted
    std::vector<std::string> warnings;          // marginal strata, dropped faces
};

// Validating constructor for externally supplied complexes: sorts and
// dedups faces, throws SchemaError on malformed input or a downward-closure
// violation.
IncidenceComplex make_complex(int q, std::vector<int> vertices,
                              std::vector<std::pair<int, int>> edges,
                              std::vector<std::array<int, 3>> triangles);

// Measures the cluster and assembles its complex: vertices are cells of
// measure > 1e-9, edges are interfaces of area > max(1e-9, 3 sigma),
// triangles are LP-nonempty triple intersections. Uses the quadrature path
// for q <= 4 and Monte Carlo beyond; marginal values near the thresholds
// are reported in warnings.
IncidenceComplex build_complex(const PullbackCluster& c, const McSpec& mc = {});

// Betti numbers b0 and b1 over Q, via exact integer ranks of the boundary
// maps (fraction-free Bareiss elimination).
struct HomologyRanks {
    int b0;
    int b1;
};
HomologyRanks homology_ranks(const IncidenceComplex& s);

// Unit normals on the edges of a complex, stored for i < j in the
// cell-i-to-cell-j orientation.
struct EdgeNormalAssignment {
    int q = 0;
    int n = 0;
    std::map<std::pair<int, int>, Eigen::VectorXd> normals;
};

// Least-squares reconstruction of B from normals n_ij = B(e_j - e_i) on a
// connected edge graph. Checks the cycle condition on a fundamental cycle
// basis first: violations above 1e-3 throw InconsistencyError, and the
// consistent flag reports whether everything stayed below 1e-6.
struct RecoveredB {
    Eigen::MatrixXd B;  // n x q, annihilates ones
    double residual;    // l2 misfit over all edges and coordinates
    double max_cycle_violation;
    bool consistent;
};
RecoveredB recover_B(const EdgeNormalAssignment& assignment);

}  // namespace multibubble
