#include "vlslab/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "vlslab/errors.hpp"

namespace vlslab {

std::pair<std::vector<double>, std::vector<double>> lift(const VlsState& state,
                                                         const RankOneInstance& inst) {
    const int n = inst.n();
    if (static_cast<int>(state.x.size()) != n || static_cast<int>(state.y.size()) != n)
        throw std::invalid_argument("lift: state size must equal n");
    std::vector<double> u(n), v(n);
    for (int i = 0; i < n; ++i) {
        u[i] = state.x[i] / inst.alpha()[i];
        v[i] = state.y[i] / inst.beta()[i];
    }
    return {std::move(u), std::move(v)};
}

namespace {

// sum_{l:l~j} alpha_l x_l per column node, and sum_{l:i~l} y_l^2 per row
// node; these are the C and B row denominators of Eq-style definitions and
// must be positive for a valid state.
std::vector<double> col_weights(const VlsState& state, const RankOneInstance& inst) {
    const int n = inst.n();
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k : inst.graph().col_neighbors(j)) s += inst.alpha()[k] * state.x[k];
        if (!(s > 0.0) || !std::isfinite(s))
            throw NumericalError("consensus: column weight sum not positive and finite");
        w[j] = s;
    }
    return w;
}

std::vector<double> row_weights(const VlsState& state, const RankOneInstance& inst) {
    const int n = inst.n();
    std::vector<double> den(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int l : inst.graph().row_neighbors(i)) s += state.y[l] * state.y[l];
        if (!(s > 0.0) || !std::isfinite(s))
            throw NumericalError("consensus: row weight sum not positive and finite");
        den[i] = s;
    }
    return den;
}

} // namespace

Mat closed_form_p(const VlsState& state, const RankOneInstance& inst, Exec exec) {
    const int n = inst.n();
    if (static_cast<int>(state.x.size()) != n || static_cast<int>(state.y.size()) != n)
        throw std::invalid_argument("closed_form_p: state size must equal n");
    const auto w = col_weights(state, inst);
    const auto den = row_weights(state, inst);
    const auto& g = inst.graph();
    Mat p(n, n);
    // One row at a time: scatter y_l^2/w_l over the columns' row neighbors,
    // then scale. Rows are disjoint and inner loops run in fixed sorted
    // order, so Par matches Serial bitwise.
    auto fill_row = [&](int i, std::vector<double>& s) {
        for (int l : g.row_neighbors(i)) {
            const double coef = state.y[l] * state.y[l] / w[l];
            for (int k : g.col_neighbors(l)) s[k] += coef;
        }
        double* out = p.row(i);
        for (int j = 0; j < n; ++j) {
            out[j] = inst.alpha()[j] * state.x[j] * s[j] / den[i];
            s[j] = 0.0;
        }
    };
    if (exec == Exec::Par) {
#pragma omp parallel
        {
            std::vector<double> s(n, 0.0);
#pragma omp for schedule(static)
            for (int i = 0; i < n; ++i) fill_row(i, s);
        }
    } else {
        std::vector<double> s(n, 0.0);
        for (int i = 0; i < n; ++i) fill_row(i, s);
    }
    return p;
}

ConsensusSnapshot build_matrices(const VlsState& state, const RankOneInstance& inst, Exec exec) {
    const int n = inst.n();
    if (static_cast<int>(state.x.size()) != n || static_cast<int>(state.y.size()) != n)
        throw std::invalid_argument("build_matrices: state size must equal n");
    const auto& g = inst.graph();
    const auto w = col_weights(state, inst);
    const auto den = row_weights(state, inst);

    ConsensusSnapshot snap;
    snap.t = state.t;
    auto uv = lift(state, inst);
    snap.u = std::move(uv.first);
    snap.v = std::move(uv.second);

    snap.B = Mat(n, n);
    snap.C = Mat(n, n);
    for (int i = 0; i < n; ++i)
        for (int l : g.row_neighbors(i)) snap.B(i, l) = state.y[l] * state.y[l] / den[i];
    for (int j = 0; j < n; ++j)
        for (int k : g.col_neighbors(j)) snap.C(j, k) = inst.alpha()[k] * state.x[k] / w[j];

    mat_mul(snap.B, snap.C, snap.P, exec);

    snap.pi_hat.resize(n);
    snap.pi.resize(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        snap.pi_hat[i] = inst.alpha()[i] * state.x[i] * den[i];
        total += snap.pi_hat[i];
    }
    if (!(total > 0.0) || !std::isfinite(total))
        throw NumericalError("build_matrices: stationary vector not normalizable");
    for (int i = 0; i < n; ++i) snap.pi[i] = snap.pi_hat[i] / total;

    const double diff = max_abs_diff(snap.P, closed_form_p(state, inst, exec));
    if (!(diff <= 1e-12))
        throw NumericalError("build_matrices: product B*C disagrees with the closed-form entries");
    return snap;
}

double detailed_balance_residual(const Mat& p, const std::vector<double>& pi) {
    const int n = p.rows();
    double r = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            r = std::max(r, std::abs(pi[i] * p(i, j) - pi[j] * p(j, i)));
    return r;
}

double row_sum_residual(const Mat& p) {
    double r = 0.0;
    for (int i = 0; i < p.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < p.cols(); ++j) s += p(i, j);
        r = std::max(r, std::abs(s - 1.0));
    }
    return r;
}

DynamicsCheck verify_dynamics(const Trajectory& traj, const RankOneInstance& inst, double tol,
                              Exec exec) {
    if (traj.stride != 1)
        throw std::invalid_argument("verify_dynamics: trajectory must be recorded with stride 1");
    if (traj.states.empty() || traj.states.size() != traj.ts.size())
        throw std::invalid_argument("verify_dynamics: trajectory must be recorded with states");
    const int n = inst.n();
    DynamicsCheck chk;
    std::vector<double> pu(n);
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const VlsState& cur = traj.states[k];
        ConsensusSnapshot snap = build_matrices(cur, inst, exec);
        chk.max_db_residual = std::max(chk.max_db_residual, detailed_balance_residual(snap.P, snap.pi));
        chk.max_rowsum_residual = std::max({chk.max_rowsum_residual, row_sum_residual(snap.B),
                                            row_sum_residual(snap.C), row_sum_residual(snap.P)});
        if (k + 1 == traj.states.size()) break;
        const auto u_next = lift(traj.states[k + 1], inst).first;
        if (traj.states[k + 1].t != cur.t + 1)
            throw std::invalid_argument("verify_dynamics: recorded states are not consecutive");
        if (cur.t >= 1) {
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                const double* prow = snap.P.row(i);
                for (int j = 0; j < n; ++j) s += prow[j] * snap.u[j];
                pu[i] = s;
            }
            double r = 0.0;
            for (int i = 0; i < n; ++i) r = std::max(r, std::abs(u_next[i] - pu[i]));
            chk.max_residual = std::max(chk.max_residual, r);
        }
        double lo = 1.0 / snap.v[0], hi = lo;
        for (int j = 1; j < n; ++j) {
            lo = std::min(lo, 1.0 / snap.v[j]);
            hi = std::max(hi, 1.0 / snap.v[j]);
        }
        for (int i = 0; i < n; ++i)
            chk.max_hull_violation =
                std::max({chk.max_hull_violation, lo - u_next[i], u_next[i] - hi});
    }
    chk.max_hull_violation = std::max(chk.max_hull_violation, 0.0);
    chk.ok = chk.max_residual <= tol;
    return chk;
}

} // namespace vlslab
