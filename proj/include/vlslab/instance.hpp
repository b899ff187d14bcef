#pragma once

#include <cstdint>
#include <vector>

#include "vlslab/graph.hpp"
#include "vlslab/parallel.hpp"

namespace vlslab {

// Ground-truth rank-one completion problem M = alpha beta^T with entries
// revealed on `graph`. Revealed values are products computed once at
// construction and never recomputed, so they stay exact even if callers
// carry perturbed copies of the factors.
class RankOneInstance {
public:
    // Validates b in (0,1), vector lengths, and b <= alpha_i, beta_j <= 1/b.
    RankOneInstance(RevealedGraph graph, double b, std::vector<double> alpha,
                    std::vector<double> beta, std::uint64_t seed = 0);

    int n() const { return graph_.n(); }
    double b() const { return b_; }
    std::uint64_t seed() const { return seed_; }
    const RevealedGraph& graph() const { return graph_; }
    const std::vector<double>& alpha() const { return alpha_; }
    const std::vector<double>& beta() const { return beta_; }

    // Revealed values in row-major edge order (aligned with graph().edges())
    // and in column-major order. row_start()[i] indexes the first value of
    // row i in row_vals(), matching graph().row_neighbors(i) element for
    // element; col_start()/col_vals() mirror that for columns.
    const std::vector<double>& row_vals() const { return row_vals_; }
    const std::vector<double>& col_vals() const { return col_vals_; }
    const std::vector<int>& row_start() const { return row_start_; }
    const std::vector<int>& col_start() const { return col_start_; }

    // M_ij for a revealed pair; throws std::invalid_argument otherwise.
    double value_at(int i, int j) const;

private:
    RevealedGraph graph_;
    double b_;
    std::uint64_t seed_;
    std::vector<double> alpha_, beta_;
    std::vector<double> row_vals_, col_vals_;
    std::vector<int> row_start_, col_start_;
};

// alpha_i, beta_j i.i.d. uniform on [b, 1/b]: all of alpha first, then all
// of beta, from one generator seeded with `seed`.
RankOneInstance sample_instance(const RevealedGraph& graph, double b, std::uint64_t seed);

// Sum over revealed pairs of (x_i y_j - M_ij)^2.
double project_revealed(const std::vector<double>& x, const std::vector<double>& y,
                        const RankOneInstance& inst, Exec exec = Exec::Serial);

// (1/n) * Frobenius norm of x y^T - alpha beta^T over ALL n^2 entries.
double frobenius_error(const std::vector<double>& x, const std::vector<double>& y,
                       const RankOneInstance& inst, Exec exec = Exec::Serial);

} // namespace vlslab
