// One-dimensional Gaussian primitives, adaptive quadrature, and the measure
// functionals of the model cluster (cells = shifted argmax regions of the
// standard Gaussian on E).
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "multibubble/errors.hpp"
#include "multibubble/rng.hpp"
#include "multibubble/simplex.hpp"

namespace multibubble {

double normal_pdf(double t);
double normal_cdf(double t);
// Inverse of normal_cdf on (0,1); throws DomainError at the endpoints.
double normal_quantile(double p);

struct QuadratureSpec {
    double abs_tol = 1e-11;
    int max_subdivisions = 200;
    double half_width = 10.0;  // integration window [-half_width, half_width]
};

struct McSpec {
    std::int64_t sample_count = 1'000'000;
    std::uint64_t seed = 42;
    std::uint64_t stream_id = 0;
};

struct McEstimate {
    double value;
    double std_err;
};

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kGK15Kronrod[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGK15Gauss[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double resk = kGK15Kronrod[7] * fc;
    double resg = kGK15Gauss[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double fsum = f(c - h * kGK15Nodes[j]) + f(c + h * kGK15Nodes[j]);
        resk += kGK15Kronrod[j] * fsum;
        if (j % 2 == 1) resg += kGK15Gauss[j / 2] * fsum;
    }
    kronrod = resk * h;
    err = std::abs((resk - resg) * h);
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a,b] to absolute tolerance;
// throws AccuracyError when the subdivision budget is exhausted first.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol, int max_subdivisions) {
    struct Segment {
        double a, b, value, err;
        bool operator<(const Segment& o) const { return err < o.err; }
    };
    std::priority_queue<Segment> queue;
    double value, err;
    detail::gk15(f, a, b, value, err);
    queue.push({a, b, value, err});
    double total_value = value, total_err = err;
    int splits = 0;
    while (total_err > abs_tol) {
        if (splits >= max_subdivisions)
            throw AccuracyError("quadrature did not converge", total_err);
        Segment worst = queue.top();
        queue.pop();
        total_value -= worst.value;
        total_err -= worst.err;
        double mid = 0.5 * (worst.a + worst.b);
        for (auto [lo, hi] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
            detail::gk15(f, lo, hi, value, err);
            queue.push({lo, hi, value, err});
            total_value += value;
            total_err += err;
        }
        ++splits;
    }
    return total_value;
}

// gamma(x + model cell i): one-dimensional integral of
// phi(t) prod_{j != i} Phi(t - x_i + x_j).
double model_cell_measure(const SimplexShift& x, int i, const QuadratureSpec& quad = {});

// gamma^{q-2}(x + model interface ij): phi(c0) times the conditional
// probability that the remaining cells lose, with c0 = (x_i - x_j)/sqrt(2);
// exactly symmetric in (i,j) by construction.
double model_interface_area(const SimplexShift& x, int i, int j,
                            const QuadratureSpec& quad = {});

// All pairwise interface areas; each unordered pair is evaluated once.
InterfaceAreaTable model_area_table(const SimplexShift& x, const QuadratureSpec& quad = {});

// Monte Carlo counterparts (frequency estimates with binomial standard
// errors), bit-reproducible in (seed, stream_id, sample_count).
McEstimate mc_model_cell_measure(const SimplexShift& x, int i, const McSpec& mc = {});
McEstimate mc_model_interface_area(const SimplexShift& x, int i, int j, const McSpec& mc = {});

}  // namespace multibubble
