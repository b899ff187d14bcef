#include "vlslab/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace vlslab {

std::string_view family_name(GraphFamily f) {
    switch (f) {
        case GraphFamily::line: return "line";
        case GraphFamily::star: return "star";
        case GraphFamily::grid2d: return "grid2d";
        case GraphFamily::grid3d: return "grid3d";
        case GraphFamily::complete: return "complete";
    }
    return "?";
}

std::optional<GraphFamily> family_from_name(std::string_view name) {
    for (GraphFamily f : {GraphFamily::line, GraphFamily::star, GraphFamily::grid2d,
                          GraphFamily::grid3d, GraphFamily::complete})
        if (name == family_name(f)) return f;
    return std::nullopt;
}

RevealedGraph::RevealedGraph(int n, std::vector<std::pair<int, int>> edges)
    : n_(n), edges_(std::move(edges)) {
    if (n_ < 1) throw std::invalid_argument("RevealedGraph: n must be >= 1");
    for (auto [i, j] : edges_)
        if (i < 0 || i >= n_ || j < 0 || j >= n_)
            throw std::invalid_argument("RevealedGraph: edge index out of range");
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw std::invalid_argument("RevealedGraph: duplicate edge");
    row_adj_.assign(n_, {});
    col_adj_.assign(n_, {});
    for (auto [i, j] : edges_) {
        row_adj_[i].push_back(j);
        col_adj_[j].push_back(i);
    }
    for (int i = 0; i < n_; ++i)
        if (row_adj_[i].empty() || col_adj_[i].empty())
            throw std::invalid_argument("RevealedGraph: every row and column needs degree >= 1");
}

bool RevealedGraph::adjacent(int i, int j) const {
    const auto& nbr = row_adj_[i];
    return std::binary_search(nbr.begin(), nbr.end(), j);
}

Mat RevealedGraph::adjacency_matrix() const {
    Mat a(n_, n_);
    for (auto [i, j] : edges_) a(i, j) = 1.0;
    return a;
}

namespace {

// Most-square factoring of m into `parts` factors, each >= 2, largest-first
// recursion on the smallest factor. Returns empty when impossible.
std::vector<int> lattice_dims(int m, int parts) {
    if (parts == 1) return m >= 2 ? std::vector<int>{m} : std::vector<int>{};
    const double root = std::pow(static_cast<double>(m), 1.0 / parts);
    int best = -1;
    for (int d = 2; d <= m; ++d) {
        if (m % d != 0) continue;
        if (d > root + 1e-9) break;
        best = d;
    }
    if (best < 0) return {};
    auto rest = lattice_dims(m / best, parts - 1);
    if (rest.empty()) return {};
    rest.insert(rest.begin(), best);
    return rest;
}

RevealedGraph make_lattice(int n, int parts) {
    auto dims = lattice_dims(2 * n, parts);
    if (dims.empty())
        throw std::invalid_argument("generate_family: 2n does not factor into a lattice with sides >= 2");
    // Cells in lexicographic order; checkerboard parity splits them into the
    // n row nodes (even parity) and n column nodes (odd parity).
    const int total = 2 * n;
    std::vector<int> strides(parts, 1);
    for (int d = parts - 2; d >= 0; --d) strides[d] = strides[d + 1] * dims[d + 1];
    std::vector<int> label(total);
    int next_row = 0, next_col = 0;
    std::vector<int> coord(parts);
    for (int cell = 0; cell < total; ++cell) {
        int rem = cell, parity = 0;
        for (int d = 0; d < parts; ++d) {
            coord[d] = rem / strides[d];
            rem %= strides[d];
            parity += coord[d];
        }
        label[cell] = (parity % 2 == 0) ? next_row++ : next_col++;
    }
    std::vector<std::pair<int, int>> edges;
    for (int cell = 0; cell < total; ++cell) {
        int rem = cell, parity = 0;
        for (int d = 0; d < parts; ++d) {
            coord[d] = rem / strides[d];
            rem %= strides[d];
            parity += coord[d];
        }
        for (int d = 0; d < parts; ++d) {
            if (coord[d] + 1 >= dims[d]) continue;
            const int other = cell + strides[d];
            if (parity % 2 == 0)
                edges.emplace_back(label[cell], label[other]);
            else
                edges.emplace_back(label[other], label[cell]);
        }
    }
    return RevealedGraph(n, std::move(edges));
}

} // namespace

RevealedGraph generate_family(GraphFamily family, int n) {
    if (n < 1) throw std::invalid_argument("generate_family: n must be >= 1");
    std::vector<std::pair<int, int>> edges;
    switch (family) {
        case GraphFamily::line:
            // r1-c1-r2-c2-...-rn-cn
            for (int i = 0; i < n; ++i) {
                edges.emplace_back(i, i);
                if (i + 1 < n) edges.emplace_back(i + 1, i);
            }
            return RevealedGraph(n, std::move(edges));
        case GraphFamily::star:
            for (int j = 0; j < n; ++j) edges.emplace_back(0, j);
            for (int i = 1; i < n; ++i) edges.emplace_back(i, 0);
            return RevealedGraph(n, std::move(edges));
        case GraphFamily::grid2d:
            return make_lattice(n, 2);
        case GraphFamily::grid3d:
            return make_lattice(n, 3);
        case GraphFamily::complete:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) edges.emplace_back(i, j);
            return RevealedGraph(n, std::move(edges));
    }
    throw std::invalid_argument("generate_family: unknown family");
}

namespace {

// BFS over the 2n bipartite vertices; row i -> vertex i, column j -> n + j.
// Returns eccentricity of `start` or -1 when not all vertices are reached.
int bfs_eccentricity(const RevealedGraph& g, int start, std::vector<int>& dist) {
    const int total = 2 * g.n();
    dist.assign(total, -1);
    std::queue<int> q;
    dist[start] = 0;
    q.push(start);
    int seen = 1, ecc = 0;
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        auto visit = [&](int w) {
            if (dist[w] >= 0) return;
            dist[w] = dist[v] + 1;
            ecc = std::max(ecc, dist[w]);
            ++seen;
            q.push(w);
        };
        if (v < g.n())
            for (int j : g.row_neighbors(v)) visit(g.n() + j);
        else
            for (int i : g.col_neighbors(v - g.n())) visit(i);
    }
    return seen == total ? ecc : -1;
}

} // namespace

bool is_connected(const RevealedGraph& g) {
    std::vector<int> dist;
    return bfs_eccentricity(g, 0, dist) >= 0;
}

GraphStats graph_stats(const RevealedGraph& g) {
    GraphStats s;
    for (int i = 0; i < g.n(); ++i) {
        s.max_degree = std::max(s.max_degree, g.row_degree(i));
        s.max_degree = std::max(s.max_degree, g.col_degree(i));
    }
    std::vector<int> dist;
    for (int v = 0; v < 2 * g.n(); ++v) {
        const int ecc = bfs_eccentricity(g, v, dist);
        if (ecc < 0) throw std::invalid_argument("graph_stats: graph is disconnected, diameter undefined");
        s.diameter = std::max(s.diameter, ecc);
    }
    return s;
}

RowProjectionGraph::RowProjectionGraph(int n, std::vector<std::pair<int, int>> edges)
    : n_(n), edges_(std::move(edges)) {
    for (auto& e : edges_)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    adj_.assign(n_, {});
    for (auto [i, j] : edges_) {
        adj_[i].push_back(j);
        if (i != j) adj_[j].push_back(i);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
}

bool RowProjectionGraph::has_edge(int i, int j) const {
    const auto& a = adj_[i];
    return std::binary_search(a.begin(), a.end(), j);
}

RowProjectionGraph project_rows(const RevealedGraph& g) {
    std::vector<std::pair<int, int>> edges;
    for (int j = 0; j < g.n(); ++j) {
        const auto& rows = g.col_neighbors(j);
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = a; b < rows.size(); ++b)
                edges.emplace_back(rows[a], rows[b]);
    }
    return RowProjectionGraph(g.n(), std::move(edges));
}

} // namespace vlslab
