#include "vlslab/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "vlslab/rng.hpp"

namespace vlslab {

RankOneInstance::RankOneInstance(RevealedGraph graph, double b, std::vector<double> alpha,
                                 std::vector<double> beta, std::uint64_t seed)
    : graph_(std::move(graph)), b_(b), seed_(seed), alpha_(std::move(alpha)), beta_(std::move(beta)) {
    if (!(b_ > 0.0 && b_ < 1.0)) throw std::invalid_argument("RankOneInstance: b must lie in (0,1)");
    const int n = graph_.n();
    if (static_cast<int>(alpha_.size()) != n || static_cast<int>(beta_.size()) != n)
        throw std::invalid_argument("RankOneInstance: factor length must equal n");
    const double hi = 1.0 / b_;
    for (int i = 0; i < n; ++i)
        if (!(alpha_[i] >= b_ && alpha_[i] <= hi) || !(beta_[i] >= b_ && beta_[i] <= hi))
            throw std::invalid_argument("RankOneInstance: factors must lie in [b, 1/b]");

    row_start_.assign(n + 1, 0);
    col_start_.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        row_start_[i + 1] = row_start_[i] + graph_.row_degree(i);
        col_start_[i + 1] = col_start_[i] + graph_.col_degree(i);
    }
    row_vals_.resize(graph_.edges().size());
    col_vals_.resize(graph_.edges().size());
    for (int i = 0; i < n; ++i) {
        const auto& nbr = graph_.row_neighbors(i);
        for (std::size_t k = 0; k < nbr.size(); ++k)
            row_vals_[row_start_[i] + static_cast<int>(k)] = alpha_[i] * beta_[nbr[k]];
    }
    for (int j = 0; j < n; ++j) {
        const auto& nbr = graph_.col_neighbors(j);
        for (std::size_t k = 0; k < nbr.size(); ++k)
            col_vals_[col_start_[j] + static_cast<int>(k)] = alpha_[nbr[k]] * beta_[j];
    }
}

double RankOneInstance::value_at(int i, int j) const {
    const auto& nbr = graph_.row_neighbors(i);
    const auto it = std::lower_bound(nbr.begin(), nbr.end(), j);
    if (it == nbr.end() || *it != j) throw std::invalid_argument("value_at: entry not revealed");
    return row_vals_[row_start_[i] + static_cast<int>(it - nbr.begin())];
}

RankOneInstance sample_instance(const RevealedGraph& graph, double b, std::uint64_t seed) {
    if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("sample_instance: b must lie in (0,1)");
    if (!is_connected(graph))
        throw std::invalid_argument("sample_instance: revealed graph must be connected");
    Rng rng(seed);
    const int n = graph.n();
    const double hi = 1.0 / b;
    std::vector<double> alpha(n), beta(n);
    for (int i = 0; i < n; ++i) alpha[i] = rng.uniform(b, hi);
    for (int j = 0; j < n; ++j) beta[j] = rng.uniform(b, hi);
    return RankOneInstance(graph, b, std::move(alpha), std::move(beta), seed);
}

namespace {

double revealed_row_partial(const std::vector<double>& x, const std::vector<double>& y,
                            const RankOneInstance& inst, int i) {
    const auto& nbr = inst.graph().row_neighbors(i);
    const double* vals = inst.row_vals().data() + inst.row_start()[i];
    double s = 0.0;
    for (std::size_t k = 0; k < nbr.size(); ++k) {
        const double d = x[i] * y[nbr[k]] - vals[k];
        s += d * d;
    }
    return s;
}

double frobenius_row_partial(const std::vector<double>& x, const std::vector<double>& y,
                             const RankOneInstance& inst, int i) {
    const double ai = inst.alpha()[i];
    double s = 0.0;
    for (int j = 0; j < inst.n(); ++j) {
        const double d = x[i] * y[j] - ai * inst.beta()[j];
        s += d * d;
    }
    return s;
}

} // namespace

// Both metrics add per-row partial sums in row order, so Serial and Par
// execution produce bit-identical results; the serial path just skips the
// scratch vector.
double project_revealed(const std::vector<double>& x, const std::vector<double>& y,
                        const RankOneInstance& inst, Exec exec) {
    const int n = inst.n();
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        throw std::invalid_argument("project_revealed: vector length must equal n");
    double s = 0.0;
    if (exec == Exec::Par) {
        std::vector<double> partial(n);
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) partial[i] = revealed_row_partial(x, y, inst, i);
        for (int i = 0; i < n; ++i) s += partial[i];
    } else {
        for (int i = 0; i < n; ++i) s += revealed_row_partial(x, y, inst, i);
    }
    return s;
}

double frobenius_error(const std::vector<double>& x, const std::vector<double>& y,
                       const RankOneInstance& inst, Exec exec) {
    const int n = inst.n();
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        throw std::invalid_argument("frobenius_error: vector length must equal n");
    double s = 0.0;
    if (exec == Exec::Par) {
        std::vector<double> partial(n);
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) partial[i] = frobenius_row_partial(x, y, inst, i);
        for (int i = 0; i < n; ++i) s += partial[i];
    } else {
        for (int i = 0; i < n; ++i) s += frobenius_row_partial(x, y, inst, i);
    }
    return std::sqrt(s) / static_cast<double>(n);
}

} // namespace vlslab
