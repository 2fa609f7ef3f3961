// Multivariate normal CDFs in dimensions 1..3, accurate enough to serve as
// the deterministic evaluation path for pull-back clusters with q <= 4.
#pragma once

#include <Eigen/Dense>

namespace multibubble {

// P(X <= h, Y <= k) for standard bivariate normals with correlation rho.
// Gauss-Legendre on the arcsine substitution; separate expansion when
// |rho| > 0.925. Absolute accuracy around 5e-15.
double bvn_cdf(double h, double k, double rho);

// P(X <= b) for X ~ N(0, cov), dim(b) in {1,2,3}. The trivariate case
// conditions on the largest-variance coordinate and integrates the
// conditional bivariate CDF adaptively to abs_tol.
double mvn_cdf(const Eigen::VectorXd& b, const Eigen::MatrixXd& cov, double abs_tol = 1e-11);

}  // namespace multibubble
