#include "multibubble/linprog.hpp"

#include <cmath>
#include <vector>

#include "multibubble/errors.hpp"

namespace multibubble {

namespace {
constexpr double kPivotTol = 1e-11;
}

double max_slack(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double box) {
    int m1 = static_cast<int>(A.rows());
    int d = static_cast<int>(A.cols());
    if (b.size() != m1) throw InvalidDimensionError("max_slack shape mismatch");
    if (m1 == 0) return 1.0;

    // Substitute x = (y + box, t + T0) >= 0 so the slack basis is feasible.
    Eigen::VectorXd rhs1 = b + box * (A * Eigen::VectorXd::Ones(d));
    double t0 = std::max(0.0, -rhs1.minCoeff()) + 1.0;
    rhs1.array() += t0;

    int n = d + 1;            // structural variables
    int m = m1 + d + 1;       // inequality rows (struct bounds included)
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, n + m + 1);
    T.block(0, 0, m1, d) = A;
    T.block(0, d, m1, 1).setOnes();
    T.block(0, n, m, m).setIdentity();
    T.block(0, n + m, m1, 1) = rhs1;
    for (int i = 0; i < d; ++i) {
        T(m1 + i, i) = 1.0;
        T(m1 + i, n + m) = 2.0 * box;
    }
    T(m1 + d, d) = 1.0;
    T(m1 + d, n + m) = 1.0 + t0;

    // Minimize -x_t starting from the all-slack basis.
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n + m);
    z[d] = -1.0;
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    for (int iter = 0; iter < 10000; ++iter) {
        int enter = -1;
        for (int j = 0; j < n + m; ++j) {
            if (z[j] < -kPivotTol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) {
            double xt = 0.0;
            for (int i = 0; i < m; ++i)
                if (basis[i] == d) xt = T(i, n + m);
            return xt - t0;
        }
        int leave = -1;
        double best = 0.0;
        for (int i = 0; i < m; ++i) {
            if (T(i, enter) > kPivotTol) {
                double ratio = T(i, n + m) / T(i, enter);
                if (leave < 0 || ratio < best - kPivotTol ||
                    (ratio < best + kPivotTol && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
        }
        if (leave < 0) throw ConvergenceError("max_slack: unbounded tableau", 0.0);
        T.row(leave) /= T(leave, enter);
        for (int i = 0; i < m; ++i) {
            if (i != leave && std::abs(T(i, enter)) > 0.0)
                T.row(i) -= T(i, enter) * T.row(leave);
        }
        z -= z[enter] * T.row(leave).head(n + m);
        basis[leave] = enter;
    }
    throw ConvergenceError("max_slack: iteration cap reached", 0.0);
}

double max_slack_eq(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                    const Eigen::MatrixXd& Aeq, const Eigen::VectorXd& beq, double box) {
    if (Aeq.rows() == 0) return max_slack(A, b, box);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Aeq);
    Eigen::VectorXd y0 = cod.solve(beq);
    if ((Aeq * y0 - beq).cwiseAbs().maxCoeff() > 1e-9) return -1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Aeq);
    if (lu.dimensionOfKernel() == 0) {
        // Unique point: feasible iff it satisfies the strict system.
        if (b.size() == 0) return 1.0;
        double slack = (b - A * y0).minCoeff();
        return std::min(slack, 1.0);
    }
    Eigen::MatrixXd Z = lu.kernel();
    Z.colwise().normalize();
    Eigen::VectorXd br = b - A * y0;
    return max_slack(A * Z, br, box);
}

}  // namespace multibubble
