// Strict feasibility of small linear inequality systems, decided by
// maximizing a common slack with a dense tableau simplex.
#pragma once

#include <Eigen/Dense>

namespace multibubble {

// Maximum t such that A y + t <= b componentwise, |y_i| <= box, t <= 1.
// The strict system A y < b is considered feasible when the result exceeds
// a caller-chosen slack (1e-9 in this library). Bland's rule, so the
// iteration always terminates; throws ConvergenceError on the cap.
double max_slack(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double box = 100.0);

// Same, restricted to the affine subspace {y : Aeq y = beq}; infeasible or
// inconsistent equality constraints yield -1.
double max_slack_eq(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                    const Eigen::MatrixXd& Aeq, const Eigen::VectorXd& beq,
                    double box = 100.0);

}  // namespace multibubble
