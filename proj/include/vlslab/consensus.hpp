#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vlslab/instance.hpp"
#include "vlslab/matrix.hpp"
#include "vlslab/parallel.hpp"
#include "vlslab/vls.hpp"

namespace vlslab {

// Lifted view of one VLS state. B averages over column neighbors (built from
// y), C averages over row neighbors (built from x), P = B*C drives the
// consensus recursion u_{t+1} = P_t u_t. pi_hat_i = alpha_i x_i sum_{k:i~k}
// y_k^2 is the unnormalized stationary vector, pi its normalization.
struct ConsensusSnapshot {
    std::int64_t t = 0;
    std::vector<double> u, v;
    Mat B, C, P;
    std::vector<double> pi_hat, pi;
};

// u_i = x_i/alpha_i, v_j = y_j/beta_j.
std::pair<std::vector<double>, std::vector<double>> lift(const VlsState& state,
                                                         const RankOneInstance& inst);

// Builds B, C, P = B*C and the stationary vector from one state. Cross-checks
// the product against the independent closed-form entry formula and throws
// NumericalError if they disagree beyond 1e-12.
ConsensusSnapshot build_matrices(const VlsState& state, const RankOneInstance& inst,
                                 Exec exec = Exec::Serial);

// Entrywise closed form for P, evaluated without forming B and C:
//   p_ij = (alpha_j x_j / sum_{k:i~k} y_k^2)
//          * sum_l y_l^2 1(i~l) 1(j~l) / sum_{k:k~l} alpha_k x_k.
Mat closed_form_p(const VlsState& state, const RankOneInstance& inst, Exec exec = Exec::Serial);

// max_ij |pi_i P_ij - pi_j P_ji| (detailed balance, Lemma 1 order of checks).
double detailed_balance_residual(const Mat& p, const std::vector<double>& pi);

// max_i |sum_j P_ij - 1|.
double row_sum_residual(const Mat& p);

struct DynamicsCheck {
    double max_residual = 0.0;        // max over t>=1 of ||u_{t+1} - P_t u_t||_inf
    double max_db_residual = 0.0;     // detailed balance, every snapshot
    double max_rowsum_residual = 0.0; // B, C and P rows, every snapshot
    double max_hull_violation = 0.0;  // u_{t+1} outside the hull of 1/v_t entries
    bool ok = false;                  // max_residual <= tol
};

// Replays a stride-1 trajectory recorded with states and checks the matrix
// recursion against the VLS engine. The recursion u_{t+1} = P_t u_t needs
// y_t to be the least-squares response to x_t, which holds from t >= 1 on
// (an arbitrary y_0 has no such tie to x_0), so the residual is taken over
// pairs whose earlier state has t >= 1. Stochasticity, detailed balance and
// the convex-hull property are checked at every snapshot including t = 0.
DynamicsCheck verify_dynamics(const Trajectory& traj, const RankOneInstance& inst,
                              double tol = 1e-10, Exec exec = Exec::Serial);

} // namespace vlslab
