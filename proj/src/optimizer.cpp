#include "multibubble/optimizer.hpp"

#include <cmath>
#include <limits>

#include "multibubble/rng.hpp"

namespace multibubble {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887;

std::uint64_t fnv64(const void* data, std::size_t len, std::uint64_t h) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

// theta = [vec(R); mu] with B = R * e_basis(q) and lambda = e_basis(q)^T mu,
// so both gauge constraints hold exactly along the whole optimization.
struct Parametrization {
    int q, n;
    Eigen::MatrixXd O;  // (q-1) x q

    Parametrization(int q_, int n_) : q(q_), n(n_), O(e_basis(q_)) {}
    int dim() const { return (q - 1) * (n + 1); }

    PullbackCluster cluster(const Eigen::VectorXd& theta) const {
        Eigen::MatrixXd R = Eigen::Map<const Eigen::MatrixXd>(theta.data(), n, q - 1);
        Eigen::VectorXd mu = theta.tail(q - 1);
        return PullbackCluster(R * O, O.transpose() * mu);
    }
    Eigen::VectorXd pack(const Eigen::MatrixXd& R, const Eigen::VectorXd& mu) const {
        Eigen::VectorXd theta(dim());
        Eigen::Map<Eigen::MatrixXd>(theta.data(), n, q - 1) = R;
        theta.tail(q - 1) = mu;
        return theta;
    }
};

struct Evaluation {
    double objective;
    double perimeter;
    double feasibility;
};

class Objective {
public:
    Objective(const Parametrization& par, const Eigen::VectorXd& target, double quad_tol)
        : par_(par), target_(target), quad_tol_(quad_tol) {}

    Evaluation eval(const Eigen::VectorXd& theta, double rho) const {
        if (!theta.allFinite()) return {std::numeric_limits<double>::infinity(), 0.0, 1.0};
        try {
            PullbackCluster c = par_.cluster(theta);
            PbTables t = pb_evaluate_quadrature(c, quad_tol_);
            Eigen::VectorXd miss = t.measures - target_;
            double feas = miss.cwiseAbs().maxCoeff();
            return {t.perimeter + rho * miss.squaredNorm(), t.perimeter, feas};
        } catch (const std::exception&) {
            return {std::numeric_limits<double>::infinity(), 0.0, 1.0};
        }
    }

    double value(const Eigen::VectorXd& theta, double rho) const {
        return eval(theta, rho).objective;
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& theta, double rho, double h) const {
        Eigen::VectorXd g(theta.size());
        Eigen::VectorXd t = theta;
        for (int k = 0; k < theta.size(); ++k) {
            double step = h * std::max(1.0, std::abs(theta[k]));
            t[k] = theta[k] + step;
            double fp = value(t, rho);
            t[k] = theta[k] - step;
            double fm = value(t, rho);
            t[k] = theta[k];
            g[k] = (fp - fm) / (2.0 * step);
        }
        return g;
    }

private:
    const Parametrization& par_;
    Eigen::VectorXd target_;
    double quad_tol_;
};

// Plain BFGS with Armijo backtracking; records accepted iterates.
int bfgs_stage(const Objective& obj, Eigen::VectorXd& theta, double rho, int max_iter,
               int& iter_counter, std::vector<OptHistoryEntry>& history) {
    int p = static_cast<int>(theta.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(p, p);
    double f = obj.value(theta, rho);
    Eigen::VectorXd g = obj.gradient(theta, rho, 1e-4);
    for (int it = 0; it < max_iter; ++it) {
        if (g.cwiseAbs().maxCoeff() < 1e-6) return it;
        Eigen::VectorXd d = -(H * g);
        if (d.dot(g) >= 0.0) {
            H.setIdentity();
            d = -g;
        }
        double t = 1.0, fn = 0.0;
        bool accepted = false;
        for (int ls = 0; ls < 25; ++ls) {
            fn = obj.value(theta + t * d, rho);
            if (fn <= f + 1e-4 * t * d.dot(g)) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) return it;
        Eigen::VectorXd theta_new = theta + t * d;
        Eigen::VectorXd g_new = obj.gradient(theta_new, rho, 1e-4);
        Eigen::VectorXd s = theta_new - theta;
        Eigen::VectorXd y = g_new - g;
        double sy = s.dot(y);
        if (sy > 1e-12) {
            Eigen::VectorXd Hy = H * y;
            double yHy = y.dot(Hy);
            H += ((sy + yHy) / (sy * sy)) * (s * s.transpose());
            H -= (Hy * s.transpose() + s * Hy.transpose()) / sy;
        }
        theta = theta_new;
        f = fn;
        g = g_new;
        Evaluation e = obj.eval(theta, rho);
        history.push_back({iter_counter++, e.objective, e.feasibility, e.perimeter});
        if (s.cwiseAbs().maxCoeff() < 1e-11) return it + 1;
    }
    return max_iter;
}

// Restore the measure constraint at fixed B by a damped Newton flow in
// lambda, using the interface-flux Jacobian dm = -L_W dlambda with weights
// W_ij = A_ij / ||B(e_j - e_i)||.
void polish_lambda(const Parametrization& par, Eigen::VectorXd& theta,
                   const Eigen::VectorXd& target, double quad_tol, double rho,
                   int& iter_counter, std::vector<OptHistoryEntry>& history) {
    for (int it = 0; it < 15; ++it) {
        PullbackCluster c = par.cluster(theta);
        PbTables t = pb_evaluate_quadrature(c, quad_tol);
        Eigen::VectorXd miss = t.measures - target;
        if (miss.cwiseAbs().maxCoeff() <= 1e-8) return;
        Eigen::MatrixXd W = Eigen::MatrixXd::Zero(c.q, c.q);
        for (int i = 0; i < c.q; ++i) {
            for (int j = i + 1; j < c.q; ++j) {
                double norm = c.edge_norm(i, j);
                if (norm > 1e-12 && t.areas.a(i, j) > 0.0) {
                    W(i, j) = t.areas.a(i, j) / norm;
                    W(j, i) = W(i, j);
                }
            }
        }
        PinvOnE lw = pinv_on_E(build_LA(W));
        if (lw.degenerate) return;
        Eigen::VectorXd dlambda = lw.pinv.m * miss;
        Eigen::VectorXd dmu = par.O * dlambda;
        double scale = 1.0;
        double base = miss.squaredNorm();
        for (int halving = 0; halving < 12; ++halving) {
            Eigen::VectorXd trial = theta;
            trial.tail(c.q - 1) += scale * dmu;
            PbTables tt = pb_evaluate_quadrature(par.cluster(trial), quad_tol);
            if ((tt.measures - target).squaredNorm() < base) {
                theta = trial;
                Eigen::VectorXd m2 = tt.measures - target;
                history.push_back({iter_counter++, tt.perimeter + rho * m2.squaredNorm(),
                                   m2.cwiseAbs().maxCoeff(), tt.perimeter});
                break;
            }
            scale *= 0.5;
            if (halving == 11) return;
        }
    }
}

}  // namespace

OptResult minimize_perimeter(const OptProblem& p) {
    if (p.q < 2 || p.q > 4)
        throw InvalidDimensionError("minimize_perimeter supports 2 <= q <= 4");
    if (p.n < p.q - 1) throw InvalidDimensionError("minimize_perimeter needs n >= q-1");
    if (p.v.q() != p.q) throw InvalidDimensionError("measure vector has wrong dimension");
    if (!p.v.strictly_interior(1e-9))
        throw DomainError("target measures must be strictly interior");

    Parametrization par(p.q, p.n);
    Objective obj(par, p.v.v, p.quad_tol);
    ProfileReport profile = model_profile(p.v);

    // One simplicial start at the profile solution, then randomized starts;
    // the stream is tied to the problem data so reruns are identical.
    std::uint64_t tag = fnv64(&p.q, sizeof p.q, 0xCBF29CE484222325ull);
    tag = fnv64(&p.n, sizeof p.n, tag);
    tag = fnv64(p.v.v.data(), sizeof(double) * p.q, tag);
    NormalStream starts_rng(p.seed, substream(tag, 0x6F707469ull));

    Eigen::MatrixXd R0 = Eigen::MatrixXd::Zero(p.n, p.q - 1);
    R0.topRows(p.q - 1) = Eigen::MatrixXd::Identity(p.q - 1, p.q - 1) / kSqrt2;
    Eigen::VectorXd mu0 = par.O * (profile.x.coords / kSqrt2);

    bool have_best = false;
    Eigen::VectorXd best_theta;
    double best_perimeter = std::numeric_limits<double>::infinity();
    double best_feas = std::numeric_limits<double>::infinity();
    std::vector<OptHistoryEntry> best_history;
    int starts_used = 0;

    for (int s = 0; s < std::max(1, p.starts); ++s) {
        Eigen::MatrixXd R = R0;
        Eigen::VectorXd mu = mu0;
        if (s > 0) {
            std::uint64_t base = static_cast<std::uint64_t>(s) << 32;
            for (int r = 0; r < R.rows(); ++r)
                for (int c2 = 0; c2 < R.cols(); ++c2)
                    R(r, c2) = starts_rng.normal(base++) / std::sqrt(2.0 * p.n);
            for (int k = 0; k < mu.size(); ++k)
                mu[k] += 0.25 * starts_rng.normal(base++);
        }
        Eigen::VectorXd theta = par.pack(R, mu);
        std::vector<OptHistoryEntry> history;
        int iter_counter = 0;
        double rho_last = p.penalty_weights.empty() ? 1e4 : p.penalty_weights.back();
        for (double rho : p.penalty_weights)
            bfgs_stage(obj, theta, rho, p.max_inner, iter_counter, history);
        polish_lambda(par, theta, p.v.v, p.quad_tol, rho_last, iter_counter, history);
        ++starts_used;

        Evaluation e = obj.eval(theta, rho_last);
        bool feasible = e.feasibility <= p.tol_v;
        bool better;
        if (have_best && best_feas <= p.tol_v)
            better = feasible && e.perimeter < best_perimeter;
        else
            better = feasible || e.feasibility < best_feas;
        if (!have_best || better) {
            have_best = true;
            best_theta = theta;
            best_perimeter = e.perimeter;
            best_feas = e.feasibility;
            best_history = std::move(history);
        }
        // The simplicial start lands on the optimum; stop early once it is
        // feasible and within a hair of the profile value.
        if (feasible && e.perimeter <= profile.value + 1e-6) break;
    }

    if (best_feas > p.tol_v)
        throw ConvergenceError("minimize_perimeter: no start reached feasibility", best_feas);

    PullbackCluster cluster = par.cluster(best_theta);
    PbTables tables = pb_evaluate_quadrature(cluster, 1e-11);
    VariationReport rep = variation_report(cluster, tables.areas);
    PbEstimate mc_check = pb_perimeter(cluster, p.mc);
    OptResult out{cluster,
                  tables.perimeter,
                  (tables.measures - p.v.v).cwiseAbs().maxCoeff(),
                  rep.isometry_defect,
                  profile.value,
                  tables.perimeter - profile.value,
                  std::move(best_history),
                  starts_used,
                  true,
                  McEstimate{mc_check.value, mc_check.std_err}};
    return out;
}

ModelComparison compare_to_model(const PullbackCluster& c, const MeasureVector& v,
                                 double quad_tol) {
    if (c.q > 4) throw InvalidDimensionError("compare_to_model supports q <= 4");
    ProfileReport profile = model_profile(v);
    PbTables tables = pb_evaluate_quadrature(c, quad_tol);
    ModelComparison cmp;
    cmp.area_deviation = (tables.areas.a - profile.areas.a).cwiseAbs();
    cmp.max_area_deviation = cmp.area_deviation.maxCoeff();
    cmp.perimeter_deviation = tables.perimeter - profile.value;
    cmp.all_interfaces_positive = true;
    for (int i = 0; i < c.q; ++i)
        for (int j = i + 1; j < c.q; ++j)
            if (tables.areas.a(i, j) <= 1e-9) cmp.all_interfaces_positive = false;
    return cmp;
}

}  // namespace multibubble
