#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vlslab/matrix.hpp"

namespace vlslab {

enum class GraphFamily { line, star, grid2d, grid3d, complete };

std::string_view family_name(GraphFamily f);
std::optional<GraphFamily> family_from_name(std::string_view name);

// Bipartite graph of revealed entries: n row nodes, n column nodes, an edge
// (i, j) whenever entry (i, j) of the target matrix is observed. Indices are
// 0-based in memory; serialized files are 1-based (see io.hpp).
//
// Construction validates well-formedness: indices in range, no duplicate
// edges, and every row and column node has degree >= 1 (the alternating
// least squares denominators need at least one revealed entry per node).
// Connectivity is a separate query; is_connected() must hold before a graph
// is used to sample instances.
class RevealedGraph {
public:
    RevealedGraph(int n, std::vector<std::pair<int, int>> edges);

    int n() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    const std::vector<int>& row_neighbors(int i) const { return row_adj_[i]; }
    const std::vector<int>& col_neighbors(int j) const { return col_adj_[j]; }
    int row_degree(int i) const { return static_cast<int>(row_adj_[i].size()); }
    int col_degree(int j) const { return static_cast<int>(col_adj_[j].size()); }

    bool adjacent(int i, int j) const;

    // 0/1 adjacency matrix A with A(i, j) = 1 iff (i, j) revealed.
    Mat adjacency_matrix() const;

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;      // sorted, unique
    std::vector<std::vector<int>> row_adj_;       // row i -> sorted column neighbors
    std::vector<std::vector<int>> col_adj_;       // column j -> sorted row neighbors
};

// Deterministic constructions of the five experiment topologies on the 2n
// bipartite vertices. Conventions (the row/column labeling is ours; any
// connected bipartite realization would do):
//   line     alternating path r1-c1-r2-c2-...-rn-cn; 2n-1 edges.
//   star     hub row r1 adjacent to every column; rows r2..rn adjacent to c1.
//   grid2d   lattice on 2n cells, sides chosen as the most-square factoring
//            r x c = 2n with r, c >= 2; rows = even-parity cells, columns =
//            odd-parity cells, each side numbered in lexicographic cell order.
//   grid3d   same with a x b x c = 2n, all sides >= 2.
//   complete every entry revealed (K_{n,n}).
// Dimensions that do not admit the lattice factoring are rejected with
// std::invalid_argument, never silently adjusted.
RevealedGraph generate_family(GraphFamily family, int n);

bool is_connected(const RevealedGraph& g);

struct GraphStats {
    int max_degree = 0; // over all 2n nodes
    int diameter = 0;   // BFS eccentricity maximum, edge count metric
};

// Throws std::invalid_argument when g is disconnected (diameter undefined).
GraphStats graph_stats(const RevealedGraph& g);

// Row-side distance-2 projection: unordered pairs (i1, i2) of row nodes that
// share a column neighbor, self-loops included. Its support equals the
// nonzero pattern of A*A^T and of the consensus matrix P.
class RowProjectionGraph {
public:
    RowProjectionGraph(int n, std::vector<std::pair<int, int>> edges);

    int n() const { return n_; }
    // Pairs normalized to i <= j, sorted, self-loops included.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    bool has_edge(int i, int j) const;

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_; // includes self
};

RowProjectionGraph project_rows(const RevealedGraph& g);

} // namespace vlslab
