#include "multibubble/simplex.hpp"

#include <cmath>

namespace multibubble {

SimplexShift::SimplexShift(Eigen::VectorXd c) : coords(std::move(c)) {
    if (coords.size() < 2) throw InvalidDimensionError("SimplexShift needs q >= 2");
    double mean = coords.mean();
    if (std::abs(mean) > 1e-12)
        throw DomainError("SimplexShift coordinates must be mean-zero");
}

MeasureVector::MeasureVector(Eigen::VectorXd raw) : v(std::move(raw)) {
    if (v.size() < 2) throw InvalidDimensionError("MeasureVector needs q >= 2");
    if (v.minCoeff() < -1e-12) throw DomainError("MeasureVector entries must be nonnegative");
    double sum = v.sum();
    if (std::abs(sum - 1.0) > 1e-9)
        throw DomainError("MeasureVector entries must sum to one");
    v = v.cwiseMax(0.0) / v.cwiseMax(0.0).sum();
}

EOperator::EOperator(Eigen::MatrixXd raw) : m(std::move(raw)) {
    if (m.rows() < 2 || m.rows() != m.cols())
        throw InvalidDimensionError("EOperator must be square with q >= 2");
    // Scale-relative tolerance: near-singular Laplacians have pseudo-inverses
    // of large norm whose roundoff exceeds any absolute threshold.
    double tol = 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol)
        throw DomainError("EOperator must be symmetric");
    if ((m.rowwise().sum()).cwiseAbs().maxCoeff() > tol)
        throw DomainError("EOperator must annihilate the ones vector");
}

InterfaceAreaTable::InterfaceAreaTable(int q_, Eigen::MatrixXd areas)
    : q(q_), a(std::move(areas)) {
    if (q < 2 || a.rows() != q || a.cols() != q)
        throw InvalidDimensionError("InterfaceAreaTable must be q x q with q >= 2");
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw DomainError("interface area table must be symmetric");
    if (a.diagonal().cwiseAbs().maxCoeff() != 0.0)
        throw DomainError("interface area table must have zero diagonal");
    if (a.minCoeff() < 0.0)
        throw DomainError("interface areas must be nonnegative");
}

double InterfaceAreaTable::total() const {
    double s = 0.0;
    for (int i = 0; i < q; ++i)
        for (int j = i + 1; j < q; ++j) s += a(i, j);
    return s;
}

std::vector<std::pair<int, int>> InterfaceAreaTable::edges(double threshold) const {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < q; ++i)
        for (int j = i + 1; j < q; ++j)
            if (a(i, j) > threshold) e.emplace_back(i, j);
    return e;
}

bool InterfaceAreaTable::is_connected(double threshold) const {
    std::vector<int> stack{0};
    std::vector<bool> seen(q, false);
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < q; ++j) {
            if (j != i && !seen[j] && a(i, j) > threshold) {
                seen[j] = true;
                ++count;
                stack.push_back(j);
            }
        }
    }
    return count == q;
}

SimplexShift project_to_E(const Eigen::VectorXd& w) {
    if (w.size() < 2) throw InvalidDimensionError("project_to_E needs q >= 2");
    Eigen::VectorXd c = w.array() - w.mean();
    // Renormalize once more so the stored mean is zero to machine precision.
    c.array() -= c.mean();
    return SimplexShift(c);
}

EOperator build_LA(const InterfaceAreaTable& areas) { return build_LA(areas.a); }

EOperator build_LA(const Eigen::MatrixXd& weights) {
    int q = static_cast<int>(weights.rows());
    if (q < 2 || weights.cols() != q)
        throw InvalidDimensionError("build_LA needs a square weight matrix");
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(q, q);
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            if (j == i) continue;
            double w = 0.5 * (weights(i, j) + weights(j, i));
            L(i, j) -= w;
            L(i, i) += w;
        }
    }
    return EOperator(L);
}

PinvOnE pinv_on_E(const EOperator& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.m);
    const Eigen::VectorXd& ev = es.eigenvalues();
    double cutoff = 1e-10 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    int q = op.q();
    Eigen::MatrixXd pinv = Eigen::MatrixXd::Zero(q, q);
    int rank = 0;
    for (int k = 0; k < q; ++k) {
        if (std::abs(ev[k]) > cutoff) {
            pinv += es.eigenvectors().col(k) * es.eigenvectors().col(k).transpose() / ev[k];
            ++rank;
        }
    }
    // Symmetrize and re-project onto E before validation.
    pinv = 0.5 * (pinv + pinv.transpose());
    Eigen::MatrixXd proj =
        Eigen::MatrixXd::Identity(q, q) - Eigen::MatrixXd::Constant(q, q, 1.0 / q);
    pinv = proj * pinv * proj;
    pinv = 0.5 * (pinv + pinv.transpose());
    return PinvOnE{EOperator(pinv), rank, rank < q - 1};
}

Eigen::MatrixXd e_basis(int q) {
    if (q < 2) throw InvalidDimensionError("e_basis needs q >= 2");
    Eigen::MatrixXd o = Eigen::MatrixXd::Zero(q - 1, q);
    for (int k = 1; k < q; ++k) {
        double norm = std::sqrt(k * (k + 1.0));
        for (int j = 0; j < k; ++j) o(k - 1, j) = 1.0 / norm;
        o(k - 1, k) = -k / norm;
    }
    return o;
}

Eigen::MatrixXd equidistant_points(int q, int n) {
    if (q < 2) throw InvalidDimensionError("equidistant_points needs q >= 2");
    if (n < q - 1)
        throw InvalidDimensionError("equidistant_points needs n >= q - 1");
    Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(n, q);
    pts.topRows(q - 1) = e_basis(q);
    return pts;
}

Eigen::MatrixXd cone_frame(ConeKind kind) {
    int q = (kind == ConeKind::Y) ? 3 : 4;
    double scale = 1.0 / std::sqrt(static_cast<double>(q) * (q - 1.0));
    Eigen::MatrixXd d(q, q);
    for (int l = 0; l < q; ++l)
        d.col(l) = scale * (Eigen::VectorXd::Ones(q) - q * Eigen::VectorXd::Unit(q, l));
    return d;
}

CellMembership model_cell_membership(const SimplexShift& z, const SimplexShift& x) {
    if (z.q() != x.q())
        throw InvalidDimensionError("membership point has wrong dimension");
    constexpr double kTieTol = 1e-12;
    Eigen::VectorXd d = z.coords - x.coords;
    double top = d.maxCoeff();
    CellMembership out;
    for (int i = 0; i < x.q(); ++i)
        if (d[i] >= top - kTieTol) out.tied.push_back(i);
    if (out.tied.size() == 1) {
        out.cell = out.tied.front();
        out.tied.clear();
    }
    return out;
}

}  // namespace multibubble
