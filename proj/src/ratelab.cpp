#include "vlslab/ratelab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "vlslab/errors.hpp"
#include "vlslab/instance.hpp"
#include "vlslab/rng.hpp"
#include "vlslab/spectral.hpp"

namespace vlslab {

void validate(const ExperimentConfig& cfg) {
    if (cfg.n_values.empty()) throw std::invalid_argument("config: n_values must be non-empty");
    for (int n : cfg.n_values)
        if (n < 2) throw std::invalid_argument("config: n_values entries must be >= 2");
    if (cfg.b_values.empty()) throw std::invalid_argument("config: b_values must be non-empty");
    for (double b : cfg.b_values)
        if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("config: b_values entries must lie in (0,1)");
    if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (cfg.max_iters < 1) throw std::invalid_argument("config: max_iters must be >= 1");
    if (cfg.tail_window < 2) throw std::invalid_argument("config: tail_window must be >= 2");
    if (!(cfg.rate_tol > 0.0)) throw std::invalid_argument("config: rate_tol must be positive");
    if (!(cfg.cost_tol >= 0.0)) throw std::invalid_argument("config: cost_tol must be >= 0");
    if (cfg.stride < 1) throw std::invalid_argument("config: stride must be >= 1");
}

RateEstimate estimate_gamma(const std::vector<std::int64_t>& ts, const std::vector<double>& errors,
                            int tail_window, double rate_tol) {
    if (ts.size() != errors.size())
        throw std::invalid_argument("estimate_gamma: ts and errors differ in length");
    if (tail_window < 2) throw std::invalid_argument("estimate_gamma: tail_window must be >= 2");
    if (!(rate_tol > 0.0)) throw std::invalid_argument("estimate_gamma: rate_tol must be positive");
    RateEstimate est;
    if (errors.empty()) return est;

    const double floor_eff = std::max(rate_tol, 20.0 * errors.back());
    int k_end = -1;
    for (int k = static_cast<int>(errors.size()) - 1; k >= 0; --k)
        if (errors[k] >= floor_eff) {
            k_end = k;
            break;
        }
    if (k_end < 0) return est;
    const int k_start = k_end - (tail_window - 1);
    if (k_start < 0) return est;
    const std::int64_t span = ts[k_end] - ts[k_start];
    if (span <= 0 || !(errors[k_start] > 0.0)) return est;

    double gamma = std::pow(errors[k_end] / errors[k_start], 1.0 / static_cast<double>(span));
    if (!std::isfinite(gamma)) return est;
    gamma = std::clamp(gamma, 0.0, 1.0 - 1e-12);
    est.gamma = gamma;
    est.t_start = ts[k_start];
    est.t_end = ts[k_end];
    est.ok = true;
    return est;
}

RateEstimate estimate_gamma(const Trajectory& traj, int tail_window, double rate_tol) {
    return estimate_gamma(traj.ts, traj.u_errors, tail_window, rate_tol);
}

namespace {

// Lemma-2 style range and monotonicity checks on the run watchers. The exact
// bounds hold in exact arithmetic; the relative slack absorbs roundoff,
// which convergence over ~1/(1-gamma) iterations can amplify well above eps.
bool invariants_hold(const Trajectory& traj, double b) {
    const double rel = 1e-9;
    const double b2 = b * b, b3 = b2 * b;
    const auto& w = traj.watch;
    const bool ranges = w.x_min >= b3 * (1.0 - rel) && w.x_max <= (1.0 + rel) / b3 &&
                        w.y_min >= b3 * (1.0 - rel) && w.y_max <= (1.0 + rel) / b3 &&
                        w.u_min >= b2 * (1.0 - rel) && w.u_max <= (1.0 + rel) / b2 &&
                        w.v_min >= b2 * (1.0 - rel) && w.v_max <= (1.0 + rel) / b2;
    const bool monotone = traj.max_cost_increase <= 1e-12 * (1.0 + traj.costs.front());
    return ranges && monotone;
}

int max_degree(const RevealedGraph& g) {
    int d = 0;
    for (int i = 0; i < g.n(); ++i) d = std::max({d, g.row_degree(i), g.col_degree(i)});
    return d;
}

} // namespace

TrialRecord run_trial(GraphFamily family, int n, double b, int trial, const ExperimentConfig& cfg) {
    TrialRecord rec;
    rec.family = family;
    rec.n = n;
    rec.b = b;
    rec.trial = trial;

    std::uint64_t s = seed_mix(cfg.seed, static_cast<std::uint64_t>(family));
    s = seed_mix(s, static_cast<std::uint64_t>(n));
    s = seed_mix(s, b);
    s = seed_mix(s, static_cast<std::uint64_t>(trial));
    rec.seed = s;

    const RevealedGraph g = generate_family(family, n);
    const RankOneInstance inst = sample_instance(g, b, seed_mix(s, std::uint64_t{1}));
    const VlsState init = init_state(inst, seed_mix(s, std::uint64_t{2}));

    StopRule stop;
    stop.max_iters = cfg.max_iters;
    stop.cost_tol = cfg.cost_tol;
    RunOptions opts;
    opts.stride = cfg.stride;
    // Trials are the parallel unit; everything inside one stays serial.
    const Trajectory traj = run(init, inst, stop, opts, Exec::Serial);

    rec.status = traj.hit_max_iters ? "max_iters" : "converged";
    rec.iters = traj.iters;
    rec.final_cost = traj.final_cost;
    rec.invariants_ok = invariants_hold(traj, b);
    rec.max_cost_increase = traj.max_cost_increase;

    const RateEstimate est = estimate_gamma(traj, cfg.tail_window, cfg.rate_tol);
    rec.rate_ok = est.ok;
    rec.gamma_est = est.ok ? est.gamma : 0.0;
    rec.eta = 1.0 / (1.0 - rec.gamma_est);
    rec.tail_start = est.t_start;
    rec.tail_end = est.t_end;

    auto [p, pi] = limit_matrix(inst);
    const EigResult eig = eig_reversible(p, pi);
    if (std::abs(eig.values.front() - 1.0) > 1e-10)
        throw NumericalError("run_trial: principal eigenvalue of the limit matrix is not 1");
    rec.rho_limit = std::max(eig.values[1], -eig.values.back());
    rec.theorem2 = theorem2_bound(n, max_degree(g), b);
    return rec;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const int nn = static_cast<int>(cfg.n_values.size());
    const int nb = static_cast<int>(cfg.b_values.size());
    const std::int64_t total = static_cast<std::int64_t>(nn) * nb * cfg.trials;
    std::vector<TrialRecord> records(total);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const int trial = static_cast<int>(idx % cfg.trials);
        const int bi = static_cast<int>((idx / cfg.trials) % nb);
        const int ni = static_cast<int>(idx / (static_cast<std::int64_t>(cfg.trials) * nb));
        try {
            records[idx] = run_trial(cfg.family, cfg.n_values[ni], cfg.b_values[bi], trial, cfg);
        } catch (const std::exception&) {
            TrialRecord rec;
            rec.family = cfg.family;
            rec.n = cfg.n_values[ni];
            rec.b = cfg.b_values[bi];
            rec.trial = trial;
            rec.status = "failed";
            records[idx] = rec;
        }
    }
    return records;
}

std::vector<FigureRow> figure_data(const std::vector<TrialRecord>& records, FigureKind kind) {
    if (records.empty()) throw std::invalid_argument("figure_data: no records");
    for (const TrialRecord& r : records) {
        if (r.family != records.front().family)
            throw std::invalid_argument("figure_data: records mix graph families");
        if (kind == FigureKind::eta_vs_n && r.b != records.front().b)
            throw std::invalid_argument("figure_data: eta_vs_n needs a single b");
        if (kind == FigureKind::eta_vs_b && r.n != records.front().n)
            throw std::invalid_argument("figure_data: eta_vs_b needs a single n");
    }
    std::map<double, std::vector<const TrialRecord*>> cells;
    for (const TrialRecord& r : records)
        cells[kind == FigureKind::eta_vs_n ? static_cast<double>(r.n) : r.b].push_back(&r);

    std::vector<FigureRow> rows;
    rows.reserve(cells.size());
    for (const auto& [x, cell] : cells) {
        FigureRow row;
        row.x = x;
        row.count = static_cast<int>(cell.size());
        double sum = 0.0;
        for (const TrialRecord* r : cell) {
            row.max_eta = std::max(row.max_eta, r->eta);
            sum += r->eta;
            row.eta_spec = std::max(row.eta_spec, 1.0 / (1.0 - r->rho_limit));
            row.eta_bound = std::max(row.eta_bound, 1.0 / (1.0 - r->theorem2));
        }
        row.mean_eta = sum / static_cast<double>(cell.size());
        rows.push_back(row);
    }
    return rows;
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("loglog_slope: need >= 2 paired points");
    const int m = static_cast<int>(xs.size());
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(m), ly(m);
    for (int i = 0; i < m; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw std::invalid_argument("loglog_slope: values must be positive");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < m; ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    if (!(den > 0.0)) throw std::invalid_argument("loglog_slope: x values are all equal");
    return num / den;
}

} // namespace vlslab
