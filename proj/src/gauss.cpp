#include "multibubble/gauss.hpp"

#include <numbers>

namespace multibubble {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
constexpr double kInvSqrt2 = 0.7071067811865475244008444;

// Acklam's rational approximation to the normal quantile, later polished by
// one Halley step against the erfc-based CDF.
double quantile_estimate(double p) {
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        double u = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
               ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }
    if (p > 1.0 - p_low) {
        double u = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
               ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }
    double u = p - 0.5, r = u * u;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_pdf(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

double normal_cdf(double t) { return 0.5 * std::erfc(-t * kInvSqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("normal_quantile requires p in (0,1)");
    double x = quantile_estimate(p);
    for (int step = 0; step < 2; ++step) {
        double e = normal_cdf(x) - p;
        double u = e / kInvSqrt2Pi * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

namespace {

void validate(const QuadratureSpec& quad) {
    if (!(quad.abs_tol > 0.0)) throw DomainError("abs_tol must be positive");
    if (quad.max_subdivisions < 1) throw DomainError("max_subdivisions must be positive");
    if (quad.half_width < 8.0)
        throw DomainError("integration window must cover at least [-8, 8]");
}

}  // namespace

double model_cell_measure(const SimplexShift& x, int i, const QuadratureSpec& quad) {
    int q = x.q();
    validate(quad);
    if (i < 0 || i >= q) throw InvalidDimensionError("cell index out of range");
    std::vector<double> shift;
    shift.reserve(q - 1);
    for (int j = 0; j < q; ++j)
        if (j != i) shift.push_back(x.coords[j] - x.coords[i]);
    auto integrand = [&shift](double t) {
        double p = normal_pdf(t);
        for (double s : shift) p *= normal_cdf(t + s);
        return p;
    };
    return integrate(integrand, -quad.half_width, quad.half_width, quad.abs_tol,
                     quad.max_subdivisions);
}

double model_interface_area(const SimplexShift& x, int i, int j, const QuadratureSpec& quad) {
    int q = x.q();
    validate(quad);
    if (i < 0 || i >= q || j < 0 || j >= q || i == j)
        throw InvalidDimensionError("interface indices out of range");
    // Canonical ordering makes the (i,j) and (j,i) evaluations bit-identical.
    auto [lo, hi] = std::minmax(i, j);
    double d = x.coords[lo] - x.coords[hi];
    double c0 = d * kInvSqrt2;
    double density = normal_pdf(c0);
    if (q == 2) return density;
    // Condition on the interface hyperplane: the remaining coordinate has a
    // centered normal component s of variance 1/2 plus a drift d/2 - x_lo.
    std::vector<double> shift;
    shift.reserve(q - 2);
    for (int k = 0; k < q; ++k)
        if (k != lo && k != hi) shift.push_back(0.5 * d - x.coords[lo] + x.coords[k]);
    constexpr double kHalfVarNorm = 0.5641895835477562869480795;  // 1/sqrt(pi)
    auto integrand = [&shift](double s) {
        double p = kHalfVarNorm * std::exp(-s * s);
        for (double c : shift) p *= normal_cdf(s + c);
        return p;
    };
    return density * integrate(integrand, -quad.half_width, quad.half_width,
                               quad.abs_tol, quad.max_subdivisions);
}

InterfaceAreaTable model_area_table(const SimplexShift& x, const QuadratureSpec& quad) {
    int q = x.q();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(q, q);
    for (int i = 0; i < q; ++i) {
        for (int j = i + 1; j < q; ++j) {
            double v = model_interface_area(x, i, j, quad);
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    return InterfaceAreaTable(q, a);
}

McEstimate mc_model_cell_measure(const SimplexShift& x, int i, const McSpec& mc) {
    int q = x.q();
    if (i < 0 || i >= q) throw InvalidDimensionError("cell index out of range");
    if (mc.sample_count <= 0) throw DomainError("sample_count must be positive");
    NormalStream rng(mc.seed, substream(mc.stream_id, 0x63656C6Cull));  // "cell"
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < mc.sample_count; ++s) {
        std::uint64_t base = static_cast<std::uint64_t>(s) * q;
        int best = 0;
        double best_val = rng.normal(base) - x.coords[0];
        for (int j = 1; j < q; ++j) {
            double val = rng.normal(base + j) - x.coords[j];
            if (val > best_val) {
                best_val = val;
                best = j;
            }
        }
        if (best == i) ++hits;
    }
    double p = static_cast<double>(hits) / mc.sample_count;
    return {p, std::sqrt(p * (1.0 - p) / mc.sample_count)};
}

McEstimate mc_model_interface_area(const SimplexShift& x, int i, int j, const McSpec& mc) {
    int q = x.q();
    if (i < 0 || i >= q || j < 0 || j >= q || i == j)
        throw InvalidDimensionError("interface indices out of range");
    if (mc.sample_count <= 0) throw DomainError("sample_count must be positive");
    auto [lo, hi] = std::minmax(i, j);
    double d = x.coords[lo] - x.coords[hi];
    double density = normal_pdf(d * kInvSqrt2);
    if (q == 2) return {density, 0.0};
    std::uint64_t pair_tag = 0x61726561ull + 64 * lo + hi;  // "area" + pair
    NormalStream rng(mc.seed, substream(mc.stream_id, pair_tag));
    std::int64_t hits = 0;
    std::int64_t draws = q - 1;  // one variance-1/2 draw plus q-2 competitors
    for (std::int64_t s = 0; s < mc.sample_count; ++s) {
        std::uint64_t base = static_cast<std::uint64_t>(s) * draws;
        double t = rng.normal(base) * kInvSqrt2;
        bool inside = true;
        int slot = 1;
        for (int k = 0; k < q && inside; ++k) {
            if (k == lo || k == hi) continue;
            double g = rng.normal(base + slot++);
            inside = g <= t + 0.5 * d - x.coords[lo] + x.coords[k];
        }
        if (inside) ++hits;
    }
    double p = static_cast<double>(hits) / mc.sample_count;
    return {density * p, density * std::sqrt(p * (1.0 - p) / mc.sample_count)};
}

}  // namespace multibubble
