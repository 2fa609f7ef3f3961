// The measure map Psi of the model cluster, its inverse, and the multi-cell
// isoperimetric profile built from them.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "multibubble/gauss.hpp"
#include "multibubble/simplex.hpp"

namespace multibubble {

// Psi(x)_i = gamma(x + model cell i); sums to one exactly after the
// MeasureVector renormalization.
MeasureVector psi(const SimplexShift& x, const QuadratureSpec& quad = {});

// Differential of Psi at x as an operator on E: -(1/sqrt(2)) L_A(x).
EOperator dpsi(const SimplexShift& x, const QuadratureSpec& quad = {});

// Damped Newton inversion of Psi. Requires a strictly interior target;
// throws ConvergenceError (carrying the last residual) past max_iter.
struct InversionResult {
    SimplexShift x;
    int iterations;
    double residual;  // sup-norm of Psi(x) - v at exit
};
InversionResult invert_psi(const MeasureVector& v, const QuadratureSpec& quad = {},
                           int max_iter = 100, double tol = 1e-10);

// Everything the profile knows at one interior point v: the value
// I(v) = sum of interface areas at x = Psi^{-1}(v), the gradient x/sqrt(2),
// the Hessian -pinv(L_A(x)), and the residual of the trace identity
// 2 I(v) + tr_E [Hessian^{-1}] = 0 evaluated through an independent
// numerical inversion of the Hessian.
struct ProfileReport {
    MeasureVector v;
    SimplexShift x;
    double value;
    Eigen::VectorXd gradient;
    EOperator hessian;
    InterfaceAreaTable areas;
    int newton_iterations;
    double trace_residual;
};
ProfileReport model_profile(const MeasureVector& v, const QuadratureSpec& quad = {});

// Behaviour of the profile when one cell closes: compares I at
// ((1-eps) v_sub, eps) against the lower-dimensional value I(v_sub) for a
// decreasing ladder of eps values.
struct FaceLimitReport {
    double limit_value;               // I(v_sub) one dimension down
    std::vector<double> eps;          // ladder, in the order supplied
    std::vector<double> values;       // I of the padded vectors
    std::vector<double> gaps;         // |values - limit_value|
    bool decreasing;                  // gaps strictly decrease along the ladder
};
FaceLimitReport face_limit_check(const MeasureVector& v_sub,
                                 const std::vector<double>& eps_ladder,
                                 const QuadratureSpec& quad = {});

}  // namespace multibubble
