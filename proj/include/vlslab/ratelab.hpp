#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlslab/graph.hpp"
#include "vlslab/vls.hpp"

namespace vlslab {

// Seed used whenever none is given, so runs are reproducible by default.
inline constexpr std::uint64_t kDefaultSeed = 1729;

struct ExperimentConfig {
    GraphFamily family = GraphFamily::line;
    std::vector<int> n_values;
    std::vector<double> b_values;
    int trials = 50;
    std::uint64_t seed = kDefaultSeed;
    std::int64_t max_iters = 1'000'000;
    int tail_window = 500;
    double rate_tol = 1e-11;
    double cost_tol = 1e-20;
    std::int64_t stride = 1;
};

// Throws std::invalid_argument on out-of-range fields.
void validate(const ExperimentConfig& cfg);

struct RateEstimate {
    double gamma = 0.0;
    std::int64_t t_start = -1; // iteration numbers bracketing the fitted tail
    std::int64_t t_end = -1;
    bool ok = false;
};

// Asymptotic rate from recorded consensus errors e_t = ||u_t - u_star 1||_2:
// the telescoped geometric mean of successive ratios over the tail_window
// recorded points ending at the last error still above the estimation floor,
// gamma = (e_end / e_start)^(1/(t_end - t_start)), clamped to [0, 1).
//
// The floor is max(rate_tol, 20 * e_last): below ~20x the final error the
// recorded errors are dominated by the drift of the consensus estimate
// u_star (taken from the final iterate, not the unknown limit) and by
// roundoff, so ratios there carry no rate information. Trajectories whose
// usable tail is shorter than tail_window points come back with ok = false
// and gamma = 0 (single-step consensus on complete graphs, for example).
RateEstimate estimate_gamma(const std::vector<std::int64_t>& ts, const std::vector<double>& errors,
                            int tail_window, double rate_tol);
RateEstimate estimate_gamma(const Trajectory& traj, int tail_window, double rate_tol = 1e-11);

struct TrialRecord {
    GraphFamily family = GraphFamily::line;
    int n = 0;
    double b = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;     // derived per-trial seed
    std::string status;         // converged | max_iters | failed
    std::int64_t iters = 0;
    double final_cost = 0.0;
    double gamma_est = 0.0;     // 0 when rate_ok is false
    double eta = 1.0;           // 1/(1 - gamma_est)
    bool rate_ok = false;
    std::int64_t tail_start = -1;
    std::int64_t tail_end = -1;
    double rho_limit = 0.0;     // spectral radius of P - 1 pi for the limit matrix
    double theorem2 = 0.0;
    bool invariants_ok = false;
    double max_cost_increase = 0.0;
};

// One Monte Carlo trial: derive seeds from (cfg.seed, family, n, b, trial),
// sample an instance, run VLS serially, estimate gamma, and attach the
// limit-matrix spectral radius and Theorem-2 style bound.
TrialRecord run_trial(GraphFamily family, int n, double b, int trial, const ExperimentConfig& cfg);

// Full sweep over cfg.n_values x cfg.b_values x trials. Trials run in
// parallel; records come back in (n, b, trial) order and are identical for
// any worker count. A trial that throws is recorded with status "failed"
// rather than aborting the sweep.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

enum class FigureKind { eta_vs_n, eta_vs_b };

struct FigureRow {
    double x = 0.0;        // n or b
    double max_eta = 0.0;  // worst observed slowdown in the cell
    double mean_eta = 0.0;
    double eta_spec = 0.0; // max over the cell of 1/(1 - rho_limit)
    double eta_bound = 0.0;// max over the cell of 1/(1 - theorem2)
    int count = 0;
};

// Aggregates records into one row per cell along the requested axis. The
// records must be homogeneous in the off-axis coordinates (one family, and
// one b for eta_vs_n / one n for eta_vs_b).
std::vector<FigureRow> figure_data(const std::vector<TrialRecord>& records, FigureKind kind);

// Least-squares slope of log y against log x; xs, ys positive.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace vlslab
