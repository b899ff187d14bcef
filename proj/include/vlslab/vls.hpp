#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "vlslab/instance.hpp"
#include "vlslab/parallel.hpp"

namespace vlslab {

struct VlsState {
    std::int64_t t = 0;
    std::vector<double> x;
    std::vector<double> y;
};

// Stopping rules for run(). max_iters always applies; cost_tol fires when
// project_revealed(x,y) <= cost_tol (negative disables, cost is >= 0);
// u_tol > 0 fires when ||u - mean(u)1||_2 <= u_tol.
struct StopRule {
    std::int64_t max_iters = 1'000'000;
    double cost_tol = 1e-16;
    double u_tol = 0.0;
};

struct RunOptions {
    std::int64_t stride = 1;      // record every stride-th iteration
    bool record_states = false;   // keep full (x, y) at recorded points
    bool record_frobenius = false;
};

// Extreme values seen over EVERY iteration of a run, recorded or not.
// u = x/alpha and v = y/beta are the lifted variables.
struct RangeWatch {
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -std::numeric_limits<double>::infinity();
    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -std::numeric_limits<double>::infinity();
    double u_min = std::numeric_limits<double>::infinity();
    double u_max = -std::numeric_limits<double>::infinity();
    double v_min = std::numeric_limits<double>::infinity();
    double v_max = -std::numeric_limits<double>::infinity();
};

struct Trajectory {
    std::int64_t stride = 1;
    std::vector<std::int64_t> ts;      // recorded iteration numbers, ts[0] = 0
    std::vector<double> costs;         // project_revealed at each recorded t
    std::vector<double> frob;          // empty unless record_frobenius
    std::vector<double> u_dev;         // ||u - mean(u)1||_2 at each recorded t
    std::vector<double> u_mean;        // mean(u) at each recorded t
    std::vector<double> u_errors;      // ||u - u_star*1||_2, filled after the run
    std::vector<VlsState> states;      // empty unless record_states

    VlsState final_state;
    double final_cost = 0.0;
    std::int64_t iters = 0;            // steps actually taken
    bool hit_max_iters = false;

    RangeWatch watch;
    double max_cost_increase = 0.0;    // most positive single-step cost change
    double u_star = 0.0;               // mean of final u, the consensus estimate

    double consensus_value() const { return u_star; }
};

// Random initialization: x then y i.i.d. uniform on [b, 1/b] from `seed`.
VlsState init_state(const RankOneInstance& inst, std::uint64_t seed);
// Explicit initialization; entries must lie in [b, 1/b].
VlsState init_state(const RankOneInstance& inst, std::vector<double> x0, std::vector<double> y0);

// One VLS iteration: x_{t+1} solves the row least-squares against y_t, then
// y_{t+1} solves the column least-squares against x_{t+1}.
VlsState step(const VlsState& state, const RankOneInstance& inst, Exec exec = Exec::Serial);

Trajectory run(const VlsState& init, const RankOneInstance& inst, const StopRule& stop,
               const RunOptions& opts = {}, Exec exec = Exec::Serial);

} // namespace vlslab
