#include "multibubble/profile.hpp"

#include <cmath>

namespace multibubble {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488016887;

Eigen::VectorXd raw_measures(const SimplexShift& x, const QuadratureSpec& quad) {
    Eigen::VectorXd m(x.q());
    for (int i = 0; i < x.q(); ++i) m[i] = model_cell_measure(x, i, quad);
    return m;
}
}  // namespace

MeasureVector psi(const SimplexShift& x, const QuadratureSpec& quad) {
    return MeasureVector(raw_measures(x, quad));
}

EOperator dpsi(const SimplexShift& x, const QuadratureSpec& quad) {
    EOperator L = build_LA(model_area_table(x, quad));
    return EOperator(-L.m / kSqrt2);
}

InversionResult invert_psi(const MeasureVector& v, const QuadratureSpec& quad,
                           int max_iter, double tol) {
    int q = v.q();
    if (!v.strictly_interior())
        throw DomainError("invert_psi requires a strictly interior measure vector");
    Eigen::VectorXd x = Eigen::VectorXd::Zero(q);
    Eigen::VectorXd r = psi(SimplexShift(x), quad).v - v.v;
    double rnorm = r.cwiseAbs().maxCoeff();
    for (int iter = 1; iter <= max_iter; ++iter) {
        if (rnorm <= tol) return {SimplexShift(x), iter - 1, rnorm};
        SimplexShift xs(x);
        EOperator L = build_LA(model_area_table(xs, quad));
        Eigen::VectorXd step = kSqrt2 * (pinv_on_E(L).pinv.m * r);
        double scale = 1.0;
        for (int halving = 0; halving < 30; ++halving) {
            Eigen::VectorXd xn = x + scale * step;
            xn.array() -= xn.mean();
            Eigen::VectorXd rn = psi(SimplexShift(xn), quad).v - v.v;
            double rn_norm = rn.cwiseAbs().maxCoeff();
            if (rn_norm < rnorm || rn_norm <= tol) {
                x = xn;
                r = rn;
                rnorm = rn_norm;
                break;
            }
            scale *= 0.5;
        }
    }
    if (rnorm <= tol) return {SimplexShift(x), max_iter, rnorm};
    throw ConvergenceError("invert_psi did not converge", rnorm);
}

ProfileReport model_profile(const MeasureVector& v, const QuadratureSpec& quad) {
    InversionResult inv = invert_psi(v, quad);
    InterfaceAreaTable areas = model_area_table(inv.x, quad);
    double value = areas.total();
    EOperator L = build_LA(areas);
    PinvOnE li = pinv_on_E(L);
    EOperator hessian(-li.pinv.m);
    // Invert the Hessian numerically (not reusing L) so the trace identity
    // is a real cross-check of the operator pipeline.
    PinvOnE hinv = pinv_on_E(hessian);
    double trace_residual = std::abs(2.0 * value + hinv.pinv.m.trace());
    return ProfileReport{v,
                         inv.x,
                         value,
                         inv.x.coords / kSqrt2,
                         hessian,
                         areas,
                         inv.iterations,
                         trace_residual};
}

FaceLimitReport face_limit_check(const MeasureVector& v_sub,
                                 const std::vector<double>& eps_ladder,
                                 const QuadratureSpec& quad) {
    if (eps_ladder.empty()) throw DomainError("face_limit_check needs eps values");
    FaceLimitReport rep;
    rep.limit_value = model_profile(v_sub, quad).value;
    rep.eps = eps_ladder;
    for (double eps : eps_ladder) {
        if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0,1)");
        Eigen::VectorXd padded(v_sub.q() + 1);
        padded.head(v_sub.q()) = (1.0 - eps) * v_sub.v;
        padded[v_sub.q()] = eps;
        double value = model_profile(MeasureVector(padded), quad).value;
        rep.values.push_back(value);
        rep.gaps.push_back(std::abs(value - rep.limit_value));
    }
    rep.decreasing = true;
    for (std::size_t i = 1; i < rep.gaps.size(); ++i)
        if (rep.gaps[i] >= rep.gaps[i - 1]) rep.decreasing = false;
    return rep;
}

}  // namespace multibubble
