#include "multibubble/homology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>

namespace multibubble {

namespace {

constexpr double kMeasureThreshold = 1e-9;

// Exact rank of a small integer matrix by fraction-free Bareiss elimination.
int bareiss_rank(std::vector<std::vector<std::int64_t>> m) {
    int rows = static_cast<int>(m.size());
    if (rows == 0) return 0;
    int cols = static_cast<int>(m[0].size());
    std::int64_t prev = 1;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r) {
            if (m[r][col] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        for (int r = rank + 1; r < rows; ++r) {
            for (int c = col + 1; c < cols; ++c) {
                __int128 num = static_cast<__int128>(m[rank][col]) * m[r][c] -
                               static_cast<__int128>(m[r][col]) * m[rank][c];
                __int128 val = num / prev;
                if (val > INT64_MAX || val < INT64_MIN)
                    throw std::overflow_error("bareiss_rank: entries too large");
                m[r][c] = static_cast<std::int64_t>(val);
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        ++rank;
    }
    return rank;
}

std::string marginal_note(const char* kind, int i, int j, int k, double value) {
    std::ostringstream os;
    os << "marginal " << kind << " (" << i;
    if (j >= 0) os << "," << j;
    if (k >= 0) os << "," << k;
    os << ") value " << value;
    return os.str();
}

}  // namespace

IncidenceComplex make_complex(int q, std::vector<int> vertices,
                              std::vector<std::pair<int, int>> edges,
                              std::vector<std::array<int, 3>> triangles) {
    if (q < 2) throw InvalidDimensionError("complex needs q >= 2");
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    for (int v : vertices)
        if (v < 0 || v >= q) throw SchemaError("vertex index out of range");
    std::set<int> vset(vertices.begin(), vertices.end());
    for (auto& [i, j] : edges) {
        if (i > j) std::swap(i, j);
        if (i == j || !vset.count(i) || !vset.count(j))
            throw SchemaError("edge with invalid endpoints");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::set<std::pair<int, int>> eset(edges.begin(), edges.end());
    for (auto& t : triangles) {
        std::sort(t.begin(), t.end());
        if (t[0] == t[1] || t[1] == t[2]) throw SchemaError("degenerate triangle");
        for (auto [a, b] : {std::pair{t[0], t[1]}, std::pair{t[0], t[2]}, std::pair{t[1], t[2]}})
            if (!eset.count({a, b}))
                throw SchemaError("triangle violates downward closure");
    }
    std::sort(triangles.begin(), triangles.end());
    triangles.erase(std::unique(triangles.begin(), triangles.end()), triangles.end());
    return IncidenceComplex{q, std::move(vertices), std::move(edges), std::move(triangles), {}};
}

IncidenceComplex build_complex(const PullbackCluster& c, const McSpec& mc) {
    if (c.has_zero_B()) throw DegenerateClusterError("rank-zero B");
    IncidenceComplex s;
    s.q = c.q;
    bool exact = c.q <= 4;
    for (int i = 0; i < c.q; ++i) {
        double m, se = 0.0;
        if (exact) {
            m = pb_cell_measure_quadrature(c, i);
        } else {
            PbEstimate e = pb_cell_measure(c, i, mc);
            m = e.value;
            se = e.std_err;
        }
        double thr = std::max(kMeasureThreshold, 3.0 * se);
        if (m > thr) s.vertices.push_back(i);
        if (m > 0.5 * thr && m < 2.0 * thr)
            s.warnings.push_back(marginal_note("cell", i, -1, -1, m));
    }
    std::set<int> vset(s.vertices.begin(), s.vertices.end());
    std::set<std::pair<int, int>> eset;
    for (int i = 0; i < c.q; ++i) {
        for (int j = i + 1; j < c.q; ++j) {
            if (!vset.count(i) || !vset.count(j)) continue;
            if (c.edge_norm(i, j) <= 1e-12) continue;
            double a, se = 0.0;
            if (exact) {
                a = pb_interface_area_quadrature(c, i, j);
            } else {
                PbAreaEstimate e = pb_interface_area(c, i, j, mc);
                a = e.value;
                se = e.std_err;
            }
            double thr = std::max(kMeasureThreshold, 3.0 * se);
            if (a > thr) {
                s.edges.emplace_back(i, j);
                eset.insert({i, j});
            }
            if (a > 0.5 * thr && a < 2.0 * thr)
                s.warnings.push_back(marginal_note("interface", i, j, -1, a));
        }
    }
    for (int i = 0; i < c.q; ++i) {
        for (int j = i + 1; j < c.q; ++j) {
            for (int k = j + 1; k < c.q; ++k) {
                if (!vset.count(i) || !vset.count(j) || !vset.count(k)) continue;
                if (!pb_triple_nonempty(c, i, j, k)) continue;
                bool closed = eset.count({i, j}) && eset.count({i, k}) && eset.count({j, k});
                if (closed) {
                    s.triangles.push_back({i, j, k});
                } else {
                    s.warnings.push_back(
                        marginal_note("triple point without closed edges", i, j, k, 0.0));
                }
            }
        }
    }
    return s;
}

HomologyRanks homology_ranks(const IncidenceComplex& s) {
    int nv = static_cast<int>(s.vertices.size());
    int ne = static_cast<int>(s.edges.size());
    int nt = static_cast<int>(s.triangles.size());
    std::map<int, int> vidx;
    for (int i = 0; i < nv; ++i) vidx[s.vertices[i]] = i;
    std::map<std::pair<int, int>, int> eidx;
    for (int i = 0; i < ne; ++i) eidx[s.edges[i]] = i;

    // d1: vertices x edges, edge (i,j) -> e_j - e_i.
    std::vector<std::vector<std::int64_t>> d1(nv, std::vector<std::int64_t>(ne, 0));
    for (int e = 0; e < ne; ++e) {
        d1[vidx.at(s.edges[e].first)][e] = -1;
        d1[vidx.at(s.edges[e].second)][e] = 1;
    }
    // d2: edges x triangles, (i<j<k) -> (jk) - (ik) + (ij).
    std::vector<std::vector<std::int64_t>> d2(ne, std::vector<std::int64_t>(nt, 0));
    for (int t = 0; t < nt; ++t) {
        auto [i, j, k] = s.triangles[t];
        d2[eidx.at({j, k})][t] = 1;
        d2[eidx.at({i, k})][t] = -1;
        d2[eidx.at({i, j})][t] = 1;
    }
    int r1 = (nv && ne) ? bareiss_rank(d1) : 0;
    int r2 = (ne && nt) ? bareiss_rank(d2) : 0;
    return HomologyRanks{nv - r1, (ne - r1) - r2};
}

RecoveredB recover_B(const EdgeNormalAssignment& assignment) {
    int q = assignment.q, n = assignment.n;
    if (q < 2 || n < 1) throw InvalidDimensionError("recover_B needs q >= 2, n >= 1");
    for (const auto& [edge, normal] : assignment.normals) {
        auto [i, j] = edge;
        if (i < 0 || j < 0 || i >= q || j >= q || i >= j)
            throw SchemaError("edge keys must satisfy 0 <= i < j < q");
        if (normal.size() != n) throw InvalidDimensionError("normal has wrong dimension");
        if (std::abs(normal.norm() - 1.0) > 1e-10)
            throw DomainError("edge normals must have unit norm");
    }
    // Connectivity over all q cells via the assigned edges.
    std::vector<std::vector<std::pair<int, int>>> adj(q);  // (neighbor, +-edge sign)
    for (const auto& [edge, normal] : assignment.normals) {
        adj[edge.first].push_back({edge.second, 1});
        adj[edge.second].push_back({edge.first, -1});
    }
    std::vector<int> parent(q, -2);
    std::vector<int> order;
    parent[0] = -1;
    order.push_back(0);
    for (std::size_t h = 0; h < order.size(); ++h) {
        int v = order[h];
        for (auto [w, sign] : adj[v]) {
            if (parent[w] == -2) {
                parent[w] = v;
                order.push_back(w);
            }
        }
    }
    if (static_cast<int>(order.size()) != q)
        throw UnderdeterminedError("edge graph does not connect all cells");

    // Cycle condition on the fundamental cycles of the BFS tree: the signed
    // sum of normals around each cycle must vanish.
    auto signed_normal = [&](int i, int j) -> Eigen::VectorXd {
        if (i < j) return assignment.normals.at({i, j});
        return -assignment.normals.at({j, i});
    };
    std::vector<int> depth(q, 0);
    for (std::size_t h = 1; h < order.size(); ++h)
        depth[order[h]] = depth[parent[order[h]]] + 1;
    // Explicit return type: an expression template here would dangle.
    auto path_sum = [&](int from, int to) -> Eigen::VectorXd {
        int a = from, b = to;
        Eigen::VectorXd up = Eigen::VectorXd::Zero(n), down = Eigen::VectorXd::Zero(n);
        while (depth[a] > depth[b]) {
            up += signed_normal(a, parent[a]);
            a = parent[a];
        }
        while (depth[b] > depth[a]) {
            down += signed_normal(parent[b], b);
            b = parent[b];
        }
        while (a != b) {
            up += signed_normal(a, parent[a]);
            down += signed_normal(parent[b], b);
            a = parent[a];
            b = parent[b];
        }
        return up + down;  // sum of normals along from -> ... -> to in tree
    };
    std::set<std::pair<int, int>> tree;
    for (int v = 0; v < q; ++v)
        if (parent[v] >= 0) tree.insert(std::minmax(v, parent[v]));
    double max_violation = 0.0;
    for (const auto& [edge, normal] : assignment.normals) {
        auto [i, j] = edge;
        if (tree.count({i, j})) continue;
        // Cycle i -> j (edge) then j -> i (tree path).
        Eigen::VectorXd loop = normal + path_sum(j, i);
        max_violation = std::max(max_violation, loop.cwiseAbs().maxCoeff());
    }
    if (max_violation > 1e-3)
        throw InconsistencyError("edge normals violate the cycle condition");

    // Per-coordinate least squares: row a of B solves
    // min sum_edges (b[j] - b[i] - n_ij[a])^2 with mean-zero gauge.
    Eigen::MatrixXd Lu = Eigen::MatrixXd::Zero(q, q);
    for (const auto& [edge, normal] : assignment.normals) {
        auto [i, j] = edge;
        Lu(i, i) += 1.0;
        Lu(j, j) += 1.0;
        Lu(i, j) -= 1.0;
        Lu(j, i) -= 1.0;
    }
    Eigen::MatrixXd Lp = pinv_on_E(EOperator(Lu)).pinv.m;
    Eigen::MatrixXd B(n, q);
    for (int a = 0; a < n; ++a) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(q);
        for (const auto& [edge, normal] : assignment.normals) {
            g[edge.second] += normal[a];
            g[edge.first] -= normal[a];
        }
        Eigen::VectorXd row = Lp * g;
        row.array() -= row.mean();
        B.row(a) = row.transpose();
    }
    double ss = 0.0;
    for (const auto& [edge, normal] : assignment.normals) {
        Eigen::VectorXd fit = B.col(edge.second) - B.col(edge.first);
        ss += (fit - normal).squaredNorm();
    }
    return RecoveredB{B, std::sqrt(ss), max_violation, max_violation <= 1e-6};
}

}  // namespace multibubble
