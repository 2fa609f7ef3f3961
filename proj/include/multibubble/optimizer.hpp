// Numerical minimization of cluster perimeter at prescribed cell measures,
// over flat pull-back clusters (B, lambda) in R^n.
#pragma once

#include <cstdint>
#include <vector>

#include "multibubble/profile.hpp"
#include "multibubble/pullback.hpp"

namespace multibubble {

struct OptProblem {
    int q = 2;
    int n = 2;
    MeasureVector v;
    std::vector<double> penalty_weights = {1e2, 1e3, 1e4};
    double tol_v = 1e-4;      // required sup-norm feasibility of the measures
    int max_inner = 160;      // BFGS iterations per penalty stage
    int starts = 5;           // multi-start count (first start is simplicial)
    std::uint64_t seed = 42;
    double quad_tol = 1e-9;   // evaluation tolerance inside the optimization
    McSpec mc;                // stochastic cross-check of the final perimeter

    OptProblem(int q_, int n_, MeasureVector v_) : q(q_), n(n_), v(std::move(v_)) {}
};

struct OptHistoryEntry {
    int iteration;
    double objective;    // penalized objective at the accepted iterate
    double feasibility;  // sup-norm of measures - v
    double perimeter;
};

struct OptResult {
    PullbackCluster cluster;
    double perimeter;       // quadrature perimeter of the final cluster
    double measure_error;   // sup-norm feasibility at the end
    double isometry_defect; // ||2 B^T B - Id_E||_op
    double profile_value;   // model profile at v
    double profile_gap;     // perimeter - profile_value
    std::vector<OptHistoryEntry> history;
    int starts_used;
    bool converged;
    McEstimate mc_perimeter;  // Monte Carlo cross-check with standard error
};

// Penalty continuation + BFGS with numerical gradients, followed by a
// multiplier polish that restores the measures through the interface-flux
// Jacobian. Multi-start; throws ConvergenceError when no start reaches the
// feasibility tolerance. Supported for q <= 4 (quadrature evaluation path).
OptResult minimize_perimeter(const OptProblem& p);

struct ModelComparison {
    Eigen::MatrixXd area_deviation;  // |A(cluster) - A(model)| per pair
    double max_area_deviation;
    double perimeter_deviation;
    bool all_interfaces_positive;    // every pair carries area > 1e-9
};
ModelComparison compare_to_model(const PullbackCluster& c, const MeasureVector& v,
                                 double quad_tol = 1e-11);

}  // namespace multibubble
