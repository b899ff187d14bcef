#pragma once

#include <string>
#include <vector>

#include "vlslab/consensus.hpp"
#include "vlslab/graph.hpp"
#include "vlslab/instance.hpp"
#include "vlslab/ratelab.hpp"
#include "vlslab/spectral.hpp"
#include "vlslab/vls.hpp"

// Serialization used by the CLI. Every number is written with the shortest
// round-trip representation, so identical inputs always produce identical
// bytes (the determinism the acceptance gate checks).

namespace vlslab {

std::string fmt_double(double v);

// Whole-file helpers used by every writer here. write_file throws
// std::invalid_argument when the path cannot be opened and
// std::runtime_error when the write itself fails.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Edge-list text format: first line "n <value>", then one 1-based "i j" pair
// per line.
void save_edge_list(const std::string& path, const RevealedGraph& g);
RevealedGraph load_edge_list(const std::string& path);

// Instance JSON: n, b, seed, alpha, beta, and the 1-based edge list.
void save_instance_json(const std::string& path, const RankOneInstance& inst);
RankOneInstance load_instance_json(const std::string& path);

// Experiment config JSON. Keys mirror ExperimentConfig exactly: family,
// n_values, b_values (required), trials, seed, max_iters, tail_window,
// rate_tol, cost_tol, stride (optional, defaulted). Unknown keys are errors.
ExperimentConfig load_experiment_config(const std::string& path);

// CSV: t,cost,frobenius_error,u_error. Requires a trajectory recorded with
// frobenius errors.
std::string trajectory_csv(const Trajectory& traj);
void save_trajectory_csv(const std::string& path, const Trajectory& traj);

// CSV: n,family,b,delta,d,lambda2,lambda_n,rho,dirichlet_gap,theorem2_bound,
// gershgorin_floor,diag_min. One row per report.
std::string spectral_csv(const std::vector<SpectralReport>& reports);
void save_spectral_csv(const std::string& path, const std::vector<SpectralReport>& reports);

std::string records_csv(const std::vector<TrialRecord>& records);
void save_records_csv(const std::string& path, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> load_records_csv(const std::string& path);

// CSV: <axis>,max_eta,mean_eta,eta_spec,eta_bound with axis "n" or "b".
std::string figure_csv(const std::vector<FigureRow>& rows, FigureKind kind);
void save_figure_csv(const std::string& path, const std::vector<FigureRow>& rows, FigureKind kind);

// Labeled text dump of one consensus snapshot (u, v, pi, and P row-major).
std::string snapshot_text(const ConsensusSnapshot& snap);
void save_snapshot_text(const std::string& path, const ConsensusSnapshot& snap);

} // namespace vlslab
