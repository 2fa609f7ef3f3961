#include "multibubble/pullback.hpp"

#include <cmath>
#include <vector>

#include "multibubble/linprog.hpp"
#include "multibubble/mvn.hpp"
#include "multibubble/rng.hpp"

namespace multibubble {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887;
constexpr double kZeroEdge = 1e-12;
constexpr double kLpSlack = 1e-9;
constexpr std::uint64_t kCellTag = 0x70625F63656C6Cull;   // pb cell draws
constexpr std::uint64_t kAreaTag = 0x70625F61726561ull;   // pb area draws

// Isotropy of S = B^T B on E: returns sigma^2 when S = sigma^2 Id_E within
// 1e-10 in the max norm, otherwise nullopt.
std::optional<double> isotropic_scale(const PullbackCluster& c) {
    Eigen::MatrixXd S = c.B.transpose() * c.B;
    int q = c.q;
    double sigma2 = S.trace() / (q - 1);
    if (sigma2 <= 0.0) return std::nullopt;
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(q, q) -
                        Eigen::MatrixXd::Constant(q, q, 1.0 / q);
    if ((S - sigma2 * P).cwiseAbs().maxCoeff() > 1e-10) return std::nullopt;
    return sigma2;
}

void check_pair(const PullbackCluster& c, int i, int j) {
    if (i < 0 || i >= c.q || j < 0 || j >= c.q || i == j)
        throw InvalidDimensionError("cell pair out of range");
}

// Drop constraints whose normal vanishes: an identically-zero row is either
// void (positive offset) or makes the region empty (non-positive offset).
struct ReducedSystem {
    Eigen::MatrixXd A;  // rows: live constraint normals (in R^n)
    Eigen::VectorXd b;
    bool empty;
};
ReducedSystem reduce_rows(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    std::vector<int> live;
    for (int r = 0; r < A.rows(); ++r) {
        if (A.row(r).norm() > kZeroEdge) {
            live.push_back(r);
        } else if (b[r] <= 0.0) {
            return {{}, {}, true};
        }
    }
    Eigen::MatrixXd Ar(live.size(), A.cols());
    Eigen::VectorXd br(live.size());
    for (std::size_t r = 0; r < live.size(); ++r) {
        Ar.row(r) = A.row(live[r]);
        br[r] = b[live[r]];
    }
    return {Ar, br, false};
}

}  // namespace

PullbackCluster::PullbackCluster(Eigen::MatrixXd B_, Eigen::VectorXd lambda_)
    : q(static_cast<int>(B_.cols())), n(static_cast<int>(B_.rows())),
      B(std::move(B_)), lambda(std::move(lambda_)) {
    if (q < 2 || n < 1) throw InvalidDimensionError("PullbackCluster needs q >= 2, n >= 1");
    if (lambda.size() != q) throw InvalidDimensionError("lambda has wrong size");
    if ((B * Eigen::VectorXd::Ones(q)).cwiseAbs().maxCoeff() > 1e-12)
        throw DomainError("B must annihilate the ones vector");
    if (std::abs(lambda.mean()) > 1e-12)
        throw DomainError("lambda must be mean-zero");
}

PullbackCluster PullbackCluster::from_raw(const Eigen::MatrixXd& B_raw,
                                          const Eigen::VectorXd& lambda_raw) {
    Eigen::MatrixXd B = B_raw;
    Eigen::VectorXd rowmean = B.rowwise().mean();
    B.colwise() -= rowmean;
    rowmean = B.rowwise().mean();
    B.colwise() -= rowmean;
    Eigen::VectorXd l = lambda_raw.array() - lambda_raw.mean();
    l.array() -= l.mean();
    return PullbackCluster(B, l);
}

PullbackCluster PullbackCluster::simplicial(const SimplexShift& x, int n) {
    int q = x.q();
    if (n < q - 1) throw InvalidDimensionError("simplicial cluster needs n >= q-1");
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, q);
    B.topRows(q - 1) = e_basis(q) / kSqrt2;
    return PullbackCluster(B, x.coords / kSqrt2);
}

Eigen::VectorXd PullbackCluster::edge_vec(int i, int j) const {
    check_pair(*this, i, j);
    return Eigen::VectorXd::Unit(q, j) - Eigen::VectorXd::Unit(q, i);
}

Eigen::VectorXd PullbackCluster::edge_normal(int i, int j) const {
    Eigen::VectorXd v = B * edge_vec(i, j);
    double norm = v.norm();
    if (norm <= kZeroEdge) throw DegenerateClusterError("zero-norm edge");
    return v / norm;
}

double PullbackCluster::offset(int i, int j) const {
    double norm = edge_norm(i, j);
    if (norm <= kZeroEdge) throw DegenerateClusterError("zero-norm edge");
    return (lambda[j] - lambda[i]) / norm;
}

std::optional<int> PullbackCluster::membership(const Eigen::VectorXd& y) const {
    if (y.size() != n) throw InvalidDimensionError("membership point has wrong dimension");
    Eigen::VectorXd f = B.transpose() * y - lambda;
    int best = 0;
    for (int i = 1; i < q; ++i)
        if (f[i] > f[best]) best = i;
    for (int i = 0; i < q; ++i)
        if (i != best && f[i] == f[best]) return std::nullopt;
    return best;
}

PbEstimate pb_cell_measure(const PullbackCluster& c, int i, const McSpec& mc) {
    if (i < 0 || i >= c.q) throw InvalidDimensionError("cell index out of range");
    if (c.has_zero_B()) throw DegenerateClusterError("rank-zero B");
    if (mc.sample_count <= 0) throw DomainError("sample_count must be positive");
    NormalStream rng(mc.seed, substream(mc.stream_id, kCellTag));
    Eigen::VectorXd y(c.n);
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < mc.sample_count; ++s) {
        std::uint64_t base = static_cast<std::uint64_t>(s) * c.n;
        for (int d = 0; d < c.n; ++d) y[d] = rng.normal(base + d);
        Eigen::VectorXd f = c.B.transpose() * y - c.lambda;
        int best = 0;
        for (int k = 1; k < c.q; ++k)
            if (f[k] > f[best]) best = k;
        if (best == i) ++hits;
    }
    double p = static_cast<double>(hits) / mc.sample_count;
    PbEstimate out{p, std::sqrt(p * (1.0 - p) / mc.sample_count), std::nullopt};
    if (auto sigma2 = isotropic_scale(c)) {
        SimplexShift x = project_to_E(c.lambda / std::sqrt(*sigma2));
        out.cross_check = model_cell_measure(x, i);
    }
    return out;
}

bool pb_interface_nonempty(const PullbackCluster& c, int i, int j) {
    check_pair(c, i, j);
    if (c.edge_norm(i, j) <= kZeroEdge) return false;
    // Relative interior within the interface hyperplane: equality on (i,j),
    // strict inequality against every other cell.
    int rows = c.q - 2;
    Eigen::MatrixXd A(rows, c.n);
    Eigen::VectorXd b(rows);
    int r = 0;
    for (int k = 0; k < c.q; ++k) {
        if (k == i || k == j) continue;
        A.row(r) = (c.B * c.edge_vec(i, k)).transpose();
        b[r] = c.lambda[k] - c.lambda[i];
        ++r;
    }
    Eigen::MatrixXd Aeq = (c.B * c.edge_vec(i, j)).transpose();
    Eigen::VectorXd beq(1);
    beq[0] = c.lambda[j] - c.lambda[i];
    ReducedSystem red = reduce_rows(A, b);
    if (red.empty) return false;
    return max_slack_eq(red.A, red.b, Aeq, beq) > kLpSlack;
}

bool pb_triple_nonempty(const PullbackCluster& c, int i, int j, int k) {
    check_pair(c, i, j);
    check_pair(c, j, k);
    check_pair(c, i, k);
    Eigen::MatrixXd Aeq(2, c.n);
    Aeq.row(0) = (c.B * c.edge_vec(i, j)).transpose();
    Aeq.row(1) = (c.B * c.edge_vec(i, k)).transpose();
    Eigen::VectorXd beq(2);
    beq[0] = c.lambda[j] - c.lambda[i];
    beq[1] = c.lambda[k] - c.lambda[i];
    int rows = c.q - 3;
    Eigen::MatrixXd A(rows, c.n);
    Eigen::VectorXd b(rows);
    int r = 0;
    for (int l = 0; l < c.q; ++l) {
        if (l == i || l == j || l == k) continue;
        A.row(r) = (c.B * c.edge_vec(i, l)).transpose();
        b[r] = c.lambda[l] - c.lambda[i];
        ++r;
    }
    ReducedSystem red = reduce_rows(A, b);
    if (red.empty) return false;
    return max_slack_eq(red.A, red.b, Aeq, beq) > kLpSlack;
}

PbAreaEstimate pb_interface_area(const PullbackCluster& c, int i, int j, const McSpec& mc) {
    check_pair(c, i, j);
    if (c.has_zero_B()) throw DegenerateClusterError("rank-zero B");
    if (mc.sample_count <= 0) throw DomainError("sample_count must be positive");
    double norm = c.edge_norm(i, j);
    if (norm <= kZeroEdge) throw DegenerateClusterError("zero-norm edge");
    auto [lo, hi] = std::minmax(i, j);
    PbAreaEstimate out{0.0, 0.0, false, std::nullopt};
    std::optional<double> sigma2 = isotropic_scale(c);
    bool model_scale = sigma2 && std::abs(*sigma2 - 0.5) <= 1e-10;
    if (!pb_interface_nonempty(c, i, j)) {
        out.empty = true;
        if (model_scale) out.cross_check = 0.0;
        return out;
    }
    Eigen::VectorXd u = c.edge_normal(lo, hi);
    double offs = c.offset(lo, hi);
    double density = normal_pdf(offs);
    // Conditional sampling on the hyperplane: y = offs*u + (g - <g,u>u).
    std::vector<Eigen::VectorXd> normals;
    std::vector<double> rhs;
    for (int k = 0; k < c.q; ++k) {
        if (k == lo || k == hi) continue;
        Eigen::VectorXd a = c.B * c.edge_vec(lo, k);
        double bk = c.lambda[k] - c.lambda[lo] - offs * a.dot(u);
        if (a.norm() <= kZeroEdge) continue;  // void here: LP said nonempty
        normals.push_back(a);
        rhs.push_back(bk);
    }
    NormalStream rng(mc.seed, substream(mc.stream_id, kAreaTag + 64 * lo + hi));
    Eigen::VectorXd g(c.n);
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < mc.sample_count; ++s) {
        std::uint64_t base = static_cast<std::uint64_t>(s) * c.n;
        for (int d = 0; d < c.n; ++d) g[d] = rng.normal(base + d);
        double gu = g.dot(u);
        bool inside = true;
        for (std::size_t r = 0; r < normals.size() && inside; ++r)
            inside = normals[r].dot(g) - gu * normals[r].dot(u) <= rhs[r];
        if (inside) ++hits;
    }
    double p = static_cast<double>(hits) / mc.sample_count;
    out.value = density * p;
    out.std_err = density * std::sqrt(p * (1.0 - p) / mc.sample_count);
    if (model_scale) {
        SimplexShift x = project_to_E(kSqrt2 * c.lambda);
        out.cross_check = model_interface_area(x, lo, hi);
    }
    return out;
}

PbEstimate pb_perimeter(const PullbackCluster& c, const McSpec& mc) {
    if (c.has_zero_B()) throw DegenerateClusterError("rank-zero B");
    double total = 0.0, var = 0.0;
    bool have_cross = true;
    double cross = 0.0;
    for (int i = 0; i < c.q; ++i) {
        for (int j = i + 1; j < c.q; ++j) {
            if (c.edge_norm(i, j) <= kZeroEdge) {
                // Coinciding cell functionals: the interface carries no area.
                continue;
            }
            PbAreaEstimate a = pb_interface_area(c, i, j, mc);
            total += a.value;
            var += a.std_err * a.std_err;
            if (a.cross_check)
                cross += *a.cross_check;
            else
                have_cross = false;
        }
    }
    PbEstimate out{total, std::sqrt(var), std::nullopt};
    if (have_cross) out.cross_check = cross;
    return out;
}

double pb_cell_measure_quadrature(const PullbackCluster& c, int i, double abs_tol) {
    if (i < 0 || i >= c.q) throw InvalidDimensionError("cell index out of range");
    if (c.q > 4) throw InvalidDimensionError("quadrature path supports q <= 4");
    if (c.has_zero_B()) throw DegenerateClusterError("rank-zero B");
    // P(W_k <= lambda_k - lambda_i) for W_k = <B(e_k - e_i), y>.
    Eigen::MatrixXd A(c.q - 1, c.n);
    Eigen::VectorXd b(c.q - 1);
    int r = 0;
    for (int k = 0; k < c.q; ++k) {
        if (k == i) continue;
        A.row(r) = (c.B * c.edge_vec(i, k)).transpose();
        b[r] = c.lambda[k] - c.lambda[i];
        ++r;
    }
    ReducedSystem red = reduce_rows(A, b);
    if (red.empty) return 0.0;
    if (red.A.rows() == 0) return 1.0;
    Eigen::MatrixXd cov = red.A * red.A.transpose();
    return mvn_cdf(red.b, cov, abs_tol);
}

double pb_interface_area_quadrature(const PullbackCluster& c, int i, int j, double abs_tol) {
    check_pair(c, i, j);
    if (c.q > 4) throw InvalidDimensionError("quadrature path supports q <= 4");
    if (c.has_zero_B()) throw DegenerateClusterError("rank-zero B");
    double norm = c.edge_norm(i, j);
    if (norm <= kZeroEdge) throw DegenerateClusterError("zero-norm edge");
    auto [lo, hi] = std::minmax(i, j);
    Eigen::VectorXd u = c.edge_normal(lo, hi);
    double offs = c.offset(lo, hi);
    double density = normal_pdf(offs);
    if (c.q == 2) return density;
    // Conditionally on the hyperplane, the losing constraints are jointly
    // Gaussian with covariance A (I - u u^T) A^T.
    Eigen::MatrixXd A(c.q - 2, c.n);
    Eigen::VectorXd b(c.q - 2);
    int r = 0;
    for (int k = 0; k < c.q; ++k) {
        if (k == lo || k == hi) continue;
        Eigen::VectorXd a = c.B * c.edge_vec(lo, k);
        A.row(r) = a.transpose();
        b[r] = c.lambda[k] - c.lambda[lo] - offs * a.dot(u);
        ++r;
    }
    Eigen::MatrixXd Ap = A - (A * u) * u.transpose();
    ReducedSystem red = reduce_rows(Ap, b);
    if (red.empty) return 0.0;
    if (red.A.rows() == 0) return density;
    Eigen::MatrixXd cov = red.A * red.A.transpose();
    double cut = 1e-14 * cov.diagonal().maxCoeff();
    for (int d = 0; d < cov.rows(); ++d) cov(d, d) = std::max(cov(d, d), cut);
    return density * mvn_cdf(red.b, cov, abs_tol);
}

PbTables pb_evaluate_quadrature(const PullbackCluster& c, double abs_tol) {
    Eigen::VectorXd measures(c.q);
    for (int i = 0; i < c.q; ++i) measures[i] = pb_cell_measure_quadrature(c, i, abs_tol);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(c.q, c.q);
    double perimeter = 0.0;
    for (int i = 0; i < c.q; ++i) {
        for (int j = i + 1; j < c.q; ++j) {
            double v = (c.edge_norm(i, j) <= kZeroEdge)
                           ? 0.0
                           : pb_interface_area_quadrature(c, i, j, abs_tol);
            a(i, j) = v;
            a(j, i) = v;
            perimeter += v;
        }
    }
    return PbTables{measures, InterfaceAreaTable(c.q, a), perimeter};
}

StationarityResult stationarity_residual(const PullbackCluster& c) {
    if (c.has_zero_B()) throw DegenerateClusterError("rank-zero B");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < c.q; ++i)
        for (int j = i + 1; j < c.q; ++j)
            if (c.edge_norm(i, j) > kZeroEdge && pb_interface_nonempty(c, i, j))
                edges.emplace_back(i, j);
    if (edges.empty()) throw DegenerateClusterError("no nonempty interfaces");
    // Least squares for H_ij = lambda_i - lambda_j over the edge graph, with
    // H_ij = -c_ij the weighted mean curvature of the flat interface.
    Eigen::MatrixXd Lu = Eigen::MatrixXd::Zero(c.q, c.q);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(c.q);
    for (auto [i, j] : edges) {
        Lu(i, i) += 1.0;
        Lu(j, j) += 1.0;
        Lu(i, j) -= 1.0;
        Lu(j, i) -= 1.0;
        double hij = -c.offset(i, j);
        h[i] += hij;
        h[j] -= hij;
    }
    Eigen::VectorXd fit = pinv_on_E(EOperator(Lu)).pinv.m * h;
    fit.array() -= fit.mean();
    double ss = 0.0;
    for (auto [i, j] : edges) {
        double res = -c.offset(i, j) - (fit[i] - fit[j]);
        ss += res * res;
    }
    return StationarityResult{std::sqrt(ss), fit};
}

VariationReport variation_report(const PullbackCluster& c, const InterfaceAreaTable& areas) {
    if (areas.q != c.q) throw InvalidDimensionError("area table dimension mismatch");
    if (c.has_zero_B()) throw DegenerateClusterError("rank-zero B");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(c.q, c.n);
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(c.n, c.n);
    for (int i = 0; i < c.q; ++i) {
        for (int j = i + 1; j < c.q; ++j) {
            double a = areas.a(i, j);
            if (a <= 0.0 || c.edge_norm(i, j) <= kZeroEdge) continue;
            Eigen::VectorXd nij = c.edge_normal(i, j);
            Eigen::VectorXd eij = c.edge_vec(i, j);  // e_j - e_i
            M -= a * eij * nij.transpose();
            N += a * nij * nij.transpose();
        }
    }
    Eigen::MatrixXd L = build_LA(areas).m;
    Eigen::MatrixXd Lp = pinv_on_E(EOperator(L)).pinv.m;
    Eigen::MatrixXd gap = N - M.transpose() * Lp * M;
    gap = 0.5 * (gap + gap.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gap);
    double min_eig = es.eigenvalues().minCoeff();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    double cutoff = 1e-10 * svd.singularValues().maxCoeff();
    int eff_dim = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()[k] > cutoff) ++eff_dim;
    StationarityResult st = stationarity_residual(c);
    Eigen::MatrixXd O = e_basis(c.q);
    Eigen::MatrixXd S = c.B.transpose() * c.B;
    Eigen::MatrixXd D = O * (2.0 * S) * O.transpose() -
                        Eigen::MatrixXd::Identity(c.q - 1, c.q - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esd(D);
    double defect = esd.eigenvalues().cwiseAbs().maxCoeff();
    return VariationReport{areas,        std::move(M), std::move(N),   std::move(L),
                           std::move(gap), min_eig,    eff_dim,        st.residual,
                           std::move(st.lambda_fit),   defect};
}

VariationReport variation_report(const PullbackCluster& c, const McSpec& mc) {
    if (c.q <= 4) {
        QuadratureSpec quad;
        return variation_report(c, pb_evaluate_quadrature(c, quad.abs_tol).areas);
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(c.q, c.q);
    for (int i = 0; i < c.q; ++i) {
        for (int j = i + 1; j < c.q; ++j) {
            a(i, j) = pb_interface_area(c, i, j, mc).value;
            a(j, i) = a(i, j);
        }
    }
    return variation_report(c, InterfaceAreaTable(c.q, std::move(a)));
}

double q_translation(const VariationReport& rep, const Eigen::VectorXd& w) {
    if (w.size() != rep.N.rows()) throw InvalidDimensionError("w has wrong dimension");
    return -w.dot(rep.N * w);
}

InwardVariation q_inward(const InterfaceAreaTable& areas, const Eigen::VectorXd& a) {
    if (a.size() != areas.q) throw InvalidDimensionError("a has wrong dimension");
    if (std::abs(a.mean()) > 1e-10) throw DomainError("a must be mean-zero");
    Eigen::MatrixXd L = build_LA(areas).m;
    Eigen::VectorXd dv = -L * a;
    return InwardVariation{-a.dot(L * a), dv};
}

}  // namespace multibubble
