#include "multibubble/mvn.hpp"

#include <algorithm>
#include <cmath>

#include "multibubble/errors.hpp"
#include "multibubble/gauss.hpp"

namespace multibubble {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// Gauss-Legendre pairs (weight, abscissa) on [-1,1]: 6, 12 and 20 points.
constexpr double kW6[3] = {0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
constexpr double kX6[3] = {0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
constexpr double kW12[6] = {0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                            0.2031674267230659, 0.2334925365383547, 0.2491470458134029};
constexpr double kX12[6] = {0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                            0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
constexpr double kW20[10] = {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                             0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                             0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                             0.1527533871307259};
constexpr double kX20[10] = {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                             0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                             0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                             0.07652652113349733};

// P(X > dh, Y > dk) for standard bivariate normals with correlation r.
double bvn_upper(double dh, double dk, double r) {
    const double* w;
    const double* x;
    int lg;
    if (std::abs(r) < 0.3) {
        w = kW6; x = kX6; lg = 3;
    } else if (std::abs(r) < 0.75) {
        w = kW12; x = kX12; lg = 6;
    } else {
        w = kW20; x = kX20; lg = 10;
    }
    double h = dh, k = dk, hk = h * k, bvn = 0.0;
    if (std::abs(r) < 0.925) {
        if (std::abs(r) > 0.0) {
            double hs = 0.5 * (h * h + k * k);
            double asr = std::asin(r);
            for (int i = 0; i < lg; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    double sn = std::sin(0.5 * asr * (is * x[i] + 1.0));
                    bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
                }
            }
            bvn *= asr / (2.0 * kTwoPi);
        }
        return bvn + normal_cdf(-h) * normal_cdf(-k);
    }
    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    if (std::abs(r) < 1.0) {
        double as = (1.0 - r) * (1.0 + r);
        double a = std::sqrt(as);
        double bs = (h - k) * (h - k);
        double c = (4.0 - hk) / 8.0;
        double d = (12.0 - hk) / 16.0;
        double asr = -0.5 * (bs / as + hk);
        if (asr > -100.0)
            bvn = a * std::exp(asr) *
                  (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
        if (-hk < 100.0) {
            double b = std::sqrt(bs);
            bvn -= std::exp(-0.5 * hk) * std::sqrt(kTwoPi) * normal_cdf(-b / a) * b *
                   (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
        }
        a *= 0.5;
        for (int i = 0; i < lg; ++i) {
            for (int is = -1; is <= 1; is += 2) {
                double xs = a * (is * x[i] + 1.0);
                xs *= xs;
                double rs = std::sqrt(1.0 - xs);
                double asr1 = -0.5 * (bs / xs + hk);
                if (asr1 > -100.0)
                    bvn += a * w[i] * std::exp(asr1) *
                           (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                            (1.0 + c * xs * (1.0 + d * xs)));
            }
        }
        bvn = -bvn / kTwoPi;
    }
    if (r > 0.0) return bvn + normal_cdf(-std::max(h, k));
    bvn = -bvn;
    if (k > h) bvn += normal_cdf(k) - normal_cdf(h);
    return bvn;
}

}  // namespace

double bvn_cdf(double h, double k, double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("correlation must lie in [-1,1]");
    double p = bvn_upper(-h, -k, rho);
    return std::clamp(p, 0.0, 1.0);
}

double mvn_cdf(const Eigen::VectorXd& b, const Eigen::MatrixXd& cov, double abs_tol) {
    int d = static_cast<int>(b.size());
    if (d < 1 || d > 3 || cov.rows() != d || cov.cols() != d)
        throw InvalidDimensionError("mvn_cdf supports dimensions 1..3");
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw DomainError("covariance must be symmetric");
    if (cov.diagonal().minCoeff() <= 0.0)
        throw DomainError("covariance must have positive diagonal");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9 * cov.cwiseAbs().maxCoeff())
        throw DomainError("covariance must be positive semidefinite");
    if (d == 1) return normal_cdf(b[0] / std::sqrt(cov(0, 0)));
    if (d == 2) {
        double s0 = std::sqrt(cov(0, 0)), s1 = std::sqrt(cov(1, 1));
        double rho = std::clamp(cov(0, 1) / (s0 * s1), -1.0, 1.0);
        return bvn_cdf(b[0] / s0, b[1] / s1, rho);
    }
    // Condition on the largest-variance coordinate and integrate it out.
    int p = 0;
    for (int i = 1; i < 3; ++i)
        if (cov(i, i) > cov(p, p)) p = i;
    int r0 = (p == 0) ? 1 : 0;
    int r1 = (p == 2) ? 1 : 2;
    double sp = std::sqrt(cov(p, p));
    Eigen::Vector2d slope(cov(r0, p) / cov(p, p), cov(r1, p) / cov(p, p));
    Eigen::Matrix2d cc;
    cc(0, 0) = cov(r0, r0) - cov(r0, p) * slope[0];
    cc(1, 1) = cov(r1, r1) - cov(r1, p) * slope[1];
    cc(0, 1) = cc(1, 0) = cov(r0, r1) - cov(r0, p) * slope[1];
    double c0 = std::sqrt(std::max(cc(0, 0), 1e-300));
    double c1 = std::sqrt(std::max(cc(1, 1), 1e-300));
    double rho = std::clamp(cc(0, 1) / (c0 * c1), -1.0, 1.0);
    double hi = std::min(b[p], 8.5 * sp);
    double lo = -8.5 * sp;
    if (hi <= lo) return 0.0;
    auto integrand = [&](double t) {
        double z0 = (b[r0] - slope[0] * t) / c0;
        double z1 = (b[r1] - slope[1] * t) / c1;
        return normal_pdf(t / sp) / sp * bvn_cdf(z0, z1, rho);
    };
    return integrate(integrand, lo, hi, abs_tol, 400);
}

}  // namespace multibubble
