// Flat pull-back clusters: cells are argmax regions of the affine map
// y -> B^T y - lambda for y in R^n, so every interface lies on a hyperplane
// { <n_ij, y> = c_ij } with n_ij = B(e_j - e_i)/||.|| and
// c_ij = (lambda_j - lambda_i)/||.||.
#pragma once

#include <Eigen/Dense>
#include <optional>

#include "multibubble/gauss.hpp"
#include "multibubble/simplex.hpp"

namespace multibubble {

struct PullbackCluster {
    int q, n;
    Eigen::MatrixXd B;       // n x q, annihilates the ones vector
    Eigen::VectorXd lambda;  // mean-zero offsets

    PullbackCluster(Eigen::MatrixXd B_, Eigen::VectorXd lambda_);

    // Projects raw inputs onto the admissible set (columns of B and lambda
    // both recentered); the optimizer iterates through this.
    static PullbackCluster from_raw(const Eigen::MatrixXd& B_raw,
                                    const Eigen::VectorXd& lambda_raw);

    // The model cluster with shift x embedded in R^n: B has 2 B^T B = Id_E,
    // lambda = x/sqrt(2), so cell measures equal Psi(x) exactly.
    static PullbackCluster simplicial(const SimplexShift& x, int n);

    Eigen::VectorXd edge_vec(int i, int j) const;     // e_j - e_i in R^q
    double edge_norm(int i, int j) const { return (B * edge_vec(i, j)).norm(); }
    Eigen::VectorXd edge_normal(int i, int j) const;  // unit, points cell i -> cell j
    double offset(int i, int j) const;                // c_ij
    std::optional<int> membership(const Eigen::VectorXd& y) const;
    bool has_zero_B() const { return B.cwiseAbs().maxCoeff() <= 1e-14; }
};

struct PbEstimate {
    double value;
    double std_err;
    std::optional<double> cross_check;  // model reduction when B^T B is isotropic
};

struct PbAreaEstimate {
    double value;
    double std_err;
    bool empty;                         // LP found no relative interior
    std::optional<double> cross_check;  // model reduction when 2 B^T B = Id_E
};

// Monte Carlo frequency estimates over y ~ N(0, Id_n); draws depend only on
// (seed, stream_id, sample index), never on (B, lambda), so perturbed
// clusters share their randomness.
PbEstimate pb_cell_measure(const PullbackCluster& c, int i, const McSpec& mc = {});
PbAreaEstimate pb_interface_area(const PullbackCluster& c, int i, int j, const McSpec& mc = {});
PbEstimate pb_perimeter(const PullbackCluster& c, const McSpec& mc = {});

// Deterministic evaluation via low-dimensional Gaussian CDFs, exact up to
// quadrature tolerance; supported for q <= 4.
double pb_cell_measure_quadrature(const PullbackCluster& c, int i, double abs_tol = 1e-11);
double pb_interface_area_quadrature(const PullbackCluster& c, int i, int j,
                                    double abs_tol = 1e-11);
struct PbTables {
    Eigen::VectorXd measures;
    InterfaceAreaTable areas;
    double perimeter;
};
PbTables pb_evaluate_quadrature(const PullbackCluster& c, double abs_tol = 1e-11);

// True when the interface between cells i and j has nonempty relative
// interior (decided by an LP with slack 1e-9).
bool pb_interface_nonempty(const PullbackCluster& c, int i, int j);

// Same decision for the triple intersection of cells i, j, k.
bool pb_triple_nonempty(const PullbackCluster& c, int i, int j, int k);

// Distance of the cluster from the first-order stationarity conditions:
// least-squares multipliers for H_ij = lambda_i - lambda_j over nonempty
// interfaces and the norm of what remains.
struct StationarityResult {
    double residual;
    Eigen::VectorXd lambda_fit;  // mean-zero multipliers
};
StationarityResult stationarity_residual(const PullbackCluster& c);

// Second-variation algebra of the cluster with the supplied interface areas:
// M = sum A_ij (e_i - e_j) n_ij^T, N = sum A_ij n_ij n_ij^T, L = L_A, and the
// matrix Cauchy-Schwarz gap N - M^T L^+ M (always PSD, zero exactly when the
// normals are a linear image of the edge vectors).
struct VariationReport {
    InterfaceAreaTable areas;
    Eigen::MatrixXd M;  // q x n
    Eigen::MatrixXd N;  // n x n
    Eigen::MatrixXd L;  // q x q Laplacian of the areas
    Eigen::MatrixXd cs_gap;
    double cs_gap_min_eig;
    int effective_dimension;  // rank of M
    double stationarity_res;
    Eigen::VectorXd lambda_fit;
    double isometry_defect;  // ||2 B^T B - Id_E||_op
};
VariationReport variation_report(const PullbackCluster& c, const InterfaceAreaTable& areas);
// Convenience overload: estimates the areas first (deterministic reduction
// for q <= 4, Monte Carlo otherwise).
VariationReport variation_report(const PullbackCluster& c, const McSpec& mc);

// Index form along a translation field w: Q(w) = -w^T N w.
double q_translation(const VariationReport& rep, const Eigen::VectorXd& w);

// Index form along the inward normal field scaled by a in E:
// Q = -a^T L_A a, with first-order measure change -L_A a.
struct InwardVariation {
    double q_value;
    Eigen::VectorXd delta_v;
};
InwardVariation q_inward(const InterfaceAreaTable& areas, const Eigen::VectorXd& a);

}  // namespace multibubble
