#include "vlslab/vls.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "vlslab/errors.hpp"
#include "vlslab/rng.hpp"

namespace vlslab {

VlsState init_state(const RankOneInstance& inst, std::uint64_t seed) {
    Rng rng(seed);
    const int n = inst.n();
    const double b = inst.b(), hi = 1.0 / inst.b();
    VlsState s;
    s.x.resize(n);
    s.y.resize(n);
    for (int i = 0; i < n; ++i) s.x[i] = rng.uniform(b, hi);
    for (int j = 0; j < n; ++j) s.y[j] = rng.uniform(b, hi);
    return s;
}

VlsState init_state(const RankOneInstance& inst, std::vector<double> x0, std::vector<double> y0) {
    const int n = inst.n();
    if (static_cast<int>(x0.size()) != n || static_cast<int>(y0.size()) != n)
        throw std::invalid_argument("init_state: vector length must equal n");
    const double b = inst.b(), hi = 1.0 / inst.b();
    for (int i = 0; i < n; ++i)
        if (!(x0[i] >= b && x0[i] <= hi) || !(y0[i] >= b && y0[i] <= hi))
            throw std::invalid_argument("init_state: initialization must lie in [b, 1/b]");
    VlsState s;
    s.x = std::move(x0);
    s.y = std::move(y0);
    return s;
}

namespace {

// Row half-step: x_i <- sum_{j:i~j} M_ij y_j / sum_{j:i~j} y_j^2. Rows are
// disjoint and each row sum runs in fixed neighbor order, so Par output is
// bit-identical to Serial. Bad denominators set `bad` instead of throwing;
// throwing from inside an OpenMP region is undefined.
void half_step_x(std::vector<double>& x, const std::vector<double>& y,
                 const RankOneInstance& inst, Exec exec, int& bad) {
    const int n = inst.n();
    const auto& g = inst.graph();
    auto one_row = [&](int i) -> int {
        const auto& nbr = g.row_neighbors(i);
        const double* vals = inst.row_vals().data() + inst.row_start()[i];
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < nbr.size(); ++k) {
            const double yk = y[nbr[k]];
            num += vals[k] * yk;
            den += yk * yk;
        }
        if (!(den > 0.0) || !std::isfinite(den) || !std::isfinite(num)) return 1;
        x[i] = num / den;
        return 0;
    };
    int flag = 0;
    if (exec == Exec::Par) {
#pragma omp parallel for schedule(static) reduction(| : flag)
        for (int i = 0; i < n; ++i) flag |= one_row(i);
    } else {
        for (int i = 0; i < n; ++i) flag |= one_row(i);
    }
    bad |= flag;
}

void half_step_y(const std::vector<double>& x, std::vector<double>& y,
                 const RankOneInstance& inst, Exec exec, int& bad) {
    const int n = inst.n();
    const auto& g = inst.graph();
    auto one_col = [&](int j) -> int {
        const auto& nbr = g.col_neighbors(j);
        const double* vals = inst.col_vals().data() + inst.col_start()[j];
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < nbr.size(); ++k) {
            const double xk = x[nbr[k]];
            num += vals[k] * xk;
            den += xk * xk;
        }
        if (!(den > 0.0) || !std::isfinite(den) || !std::isfinite(num)) return 1;
        y[j] = num / den;
        return 0;
    };
    int flag = 0;
    if (exec == Exec::Par) {
#pragma omp parallel for schedule(static) reduction(| : flag)
        for (int j = 0; j < n; ++j) flag |= one_col(j);
    } else {
        for (int j = 0; j < n; ++j) flag |= one_col(j);
    }
    bad |= flag;
}

void step_in_place(std::vector<double>& x, std::vector<double>& y,
                   const RankOneInstance& inst, Exec exec) {
    int bad = 0;
    half_step_x(x, y, inst, exec, bad);
    if (!bad) half_step_y(x, y, inst, exec, bad);
    if (bad) throw NumericalError("VLS step: least-squares denominator not positive and finite");
}

} // namespace

VlsState step(const VlsState& state, const RankOneInstance& inst, Exec exec) {
    const int n = inst.n();
    if (static_cast<int>(state.x.size()) != n || static_cast<int>(state.y.size()) != n)
        throw std::invalid_argument("step: state size must equal n");
    VlsState next;
    next.t = state.t + 1;
    next.x = state.x;
    next.y = state.y;
    step_in_place(next.x, next.y, inst, exec);
    return next;
}

Trajectory run(const VlsState& init, const RankOneInstance& inst, const StopRule& stop,
               const RunOptions& opts, Exec exec) {
    const int n = inst.n();
    if (static_cast<int>(init.x.size()) != n || static_cast<int>(init.y.size()) != n)
        throw std::invalid_argument("run: state size must equal n");
    if (stop.max_iters < 0) throw std::invalid_argument("run: max_iters must be >= 0");
    if (opts.stride < 1) throw std::invalid_argument("run: stride must be >= 1");

    Trajectory traj;
    traj.stride = opts.stride;

    std::vector<double> x = init.x, y = init.y, u(n);
    std::int64_t t = init.t;
    const std::int64_t t0 = t;

    double u_mean = 0.0, u_dev = 0.0;
    auto observe = [&]() {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            u[i] = x[i] / inst.alpha()[i];
            sum += u[i];
            traj.watch.x_min = std::min(traj.watch.x_min, x[i]);
            traj.watch.x_max = std::max(traj.watch.x_max, x[i]);
            traj.watch.u_min = std::min(traj.watch.u_min, u[i]);
            traj.watch.u_max = std::max(traj.watch.u_max, u[i]);
            const double v = y[i] / inst.beta()[i];
            traj.watch.y_min = std::min(traj.watch.y_min, y[i]);
            traj.watch.y_max = std::max(traj.watch.y_max, y[i]);
            traj.watch.v_min = std::min(traj.watch.v_min, v);
            traj.watch.v_max = std::max(traj.watch.v_max, v);
        }
        u_mean = sum / n;
        double dev2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = u[i] - u_mean;
            dev2 += d * d;
        }
        u_dev = std::sqrt(dev2);
    };
    auto record = [&](double cost) {
        traj.ts.push_back(t);
        traj.costs.push_back(cost);
        traj.u_dev.push_back(u_dev);
        traj.u_mean.push_back(u_mean);
        if (opts.record_frobenius) traj.frob.push_back(frobenius_error(x, y, inst, exec));
        if (opts.record_states) traj.states.push_back(VlsState{t, x, y});
    };

    observe();
    double cost = project_revealed(x, y, inst, exec);
    record(cost);

    bool tol_fired = (stop.cost_tol >= 0.0 && cost <= stop.cost_tol) ||
                     (stop.u_tol > 0.0 && u_dev <= stop.u_tol);
    std::int64_t steps = 0;
    while (!tol_fired && steps < stop.max_iters) {
        step_in_place(x, y, inst, exec);
        ++t;
        ++steps;
        observe();
        const double prev = cost;
        cost = project_revealed(x, y, inst, exec);
        traj.max_cost_increase = std::max(traj.max_cost_increase, cost - prev);
        tol_fired = (stop.cost_tol >= 0.0 && cost <= stop.cost_tol) ||
                    (stop.u_tol > 0.0 && u_dev <= stop.u_tol);
        if ((t - t0) % opts.stride == 0 || tol_fired || steps == stop.max_iters) record(cost);
    }

    traj.iters = steps;
    traj.hit_max_iters = !tol_fired && steps == stop.max_iters;
    traj.final_state = VlsState{t, std::move(x), std::move(y)};
    traj.final_cost = cost;
    traj.u_star = u_mean;

    // ||u_t - c1||^2 = ||u_t - mean(u_t)1||^2 + n (mean(u_t) - c)^2 with
    // c = mean of the final u, so per-iteration errors need no stored vectors.
    traj.u_errors.resize(traj.ts.size());
    for (std::size_t k = 0; k < traj.ts.size(); ++k) {
        const double shift = traj.u_mean[k] - traj.u_star;
        traj.u_errors[k] = std::sqrt(traj.u_dev[k] * traj.u_dev[k] + n * shift * shift);
    }
    return traj;
}

} // namespace vlslab
