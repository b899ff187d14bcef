// vlslab command line front end.
//
// Subcommands: simulate, spectrum, bound, experiment, figure. All randomness
// flows from --seed (or the config's seed); the default is kDefaultSeed, so
// runs are reproducible with no flags at all. Exit codes: 0 success, 1 bad
// input, 2 numerical failure.

#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vlslab/consensus.hpp"
#include "vlslab/errors.hpp"
#include "vlslab/graph.hpp"
#include "vlslab/instance.hpp"
#include "vlslab/io.hpp"
#include "vlslab/parallel.hpp"
#include "vlslab/ratelab.hpp"
#include "vlslab/rng.hpp"
#include "vlslab/spectral.hpp"
#include "vlslab/vls.hpp"

namespace {

struct InstanceArgs {
    std::string family = "line";
    int n = 8;
    double b = 0.3;
    std::string edges_file;
    std::string instance_file;
};

void add_instance_options(CLI::App* cmd, InstanceArgs& a) {
    auto* fam = cmd->add_option("--family", a.family, "graph family: line, star, grid2d, grid3d, complete")
                    ->capture_default_str();
    auto* n = cmd->add_option("--n", a.n, "matrix dimension")->capture_default_str();
    auto* b = cmd->add_option("--b", a.b, "factor entry bound, in (0,1)")->capture_default_str();
    auto* edges = cmd->add_option("--edges", a.edges_file,
                                  "edge-list file naming the revealed entries (overrides --family/--n)");
    auto* inst = cmd->add_option("--instance", a.instance_file,
                                 "instance JSON file (overrides sampling entirely)");
    edges->excludes(fam)->excludes(n)->excludes(inst);
    inst->excludes(fam)->excludes(n)->excludes(b)->excludes(edges);
}

// The top-level seed splits into independent streams: mix(seed, 1) samples
// the instance, mix(seed, 2) draws the initial state.
vlslab::RankOneInstance resolve_instance(const InstanceArgs& a, std::uint64_t seed) {
    if (!a.instance_file.empty()) return vlslab::load_instance_json(a.instance_file);
    if (!a.edges_file.empty()) {
        vlslab::RevealedGraph g = vlslab::load_edge_list(a.edges_file);
        return vlslab::sample_instance(g, a.b, vlslab::seed_mix(seed, std::uint64_t{1}));
    }
    const auto fam = vlslab::family_from_name(a.family);
    if (!fam) throw std::invalid_argument("unknown graph family '" + a.family + "'");
    return vlslab::sample_instance(vlslab::generate_family(*fam, a.n), a.b,
                                   vlslab::seed_mix(seed, std::uint64_t{1}));
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty())
        std::cout << text;
    else
        vlslab::write_file(out, text);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rank-one matrix completion by vertex least squares: "
                 "simulation, consensus spectra, bounds, and rate experiments"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker thread cap (0 = hardware default)")
        ->capture_default_str();

    // --- simulate ---
    auto* sim = app.add_subcommand("simulate", "run one VLS trial and emit its trajectory CSV");
    InstanceArgs sim_inst;
    add_instance_options(sim, sim_inst);
    std::uint64_t sim_seed = vlslab::kDefaultSeed;
    std::int64_t sim_max_iters = 1'000'000;
    double sim_cost_tol = 1e-16;
    double sim_u_tol = 0.0;
    std::int64_t sim_stride = 1;
    std::string sim_out, sim_save_instance, sim_snapshot_out;
    std::int64_t sim_snapshot_t = -1;
    sim->add_option("--seed", sim_seed, "top-level seed")->capture_default_str();
    sim->add_option("--max-iters", sim_max_iters, "iteration cap")->capture_default_str();
    sim->add_option("--cost-tol", sim_cost_tol, "stop when revealed cost <= tol (negative disables)")
        ->capture_default_str();
    sim->add_option("--u-tol", sim_u_tol, "stop when ||u - mean(u)|| <= tol (0 disables)")
        ->capture_default_str();
    sim->add_option("--stride", sim_stride, "record every stride-th iteration")->capture_default_str();
    sim->add_option("--out", sim_out, "trajectory CSV path (default stdout)");
    sim->add_option("--save-instance", sim_save_instance, "also write the instance JSON here");
    auto* snap_t = sim->add_option("--snapshot", sim_snapshot_t,
                                   "dump the consensus snapshot at this recorded iteration");
    sim->add_option("--snapshot-out", sim_snapshot_out, "snapshot output path")->needs(snap_t);

    // --- spectrum ---
    auto* spec = app.add_subcommand("spectrum", "spectral report of one instance's limit matrix");
    InstanceArgs spec_inst;
    add_instance_options(spec, spec_inst);
    std::uint64_t spec_seed = vlslab::kDefaultSeed;
    std::string spec_out;
    spec->add_option("--seed", spec_seed, "top-level seed")->capture_default_str();
    spec->add_option("--out", spec_out, "report CSV path (default stdout)");

    // --- bound ---
    auto* bnd = app.add_subcommand("bound", "closed-form eigenvalue bounds for given n, delta, b");
    int bnd_n = 0, bnd_delta = 0;
    double bnd_b = 0.0;
    std::string bnd_out;
    bnd->add_option("--n", bnd_n, "matrix dimension")->required();
    bnd->add_option("--delta", bnd_delta, "max degree of the revealed graph")->required();
    bnd->add_option("--b", bnd_b, "factor entry bound, in (0,1)")->required();
    bnd->add_option("--out", bnd_out, "CSV path (default stdout)");

    // --- experiment ---
    auto* expt = app.add_subcommand("experiment", "Monte Carlo rate sweep from a config file");
    std::string expt_config, expt_out;
    std::uint64_t expt_seed = 0;
    expt->add_option("--config", expt_config, "experiment config JSON")->required();
    expt->add_option("--out", expt_out, "records CSV path")->required();
    auto* expt_seed_opt =
        expt->add_option("--seed", expt_seed, "override the config's seed");

    // --- figure ---
    auto* fig = app.add_subcommand("figure", "aggregate trial records into plot-ready CSV");
    std::string fig_records, fig_kind, fig_out;
    fig->add_option("--records", fig_records, "records CSV from `experiment`")->required();
    fig->add_option("--kind", fig_kind, "eta_vs_n or eta_vs_b")
        ->required()
        ->check(CLI::IsMember({"eta_vs_n", "eta_vs_b"}));
    fig->add_option("--out", fig_out, "figure CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        vlslab::set_max_threads(threads);

        if (sim->parsed()) {
            const vlslab::RankOneInstance inst = resolve_instance(sim_inst, sim_seed);
            if (!sim_save_instance.empty()) vlslab::save_instance_json(sim_save_instance, inst);
            const vlslab::VlsState init = vlslab::init_state(inst, vlslab::seed_mix(sim_seed, std::uint64_t{2}));
            vlslab::StopRule stop;
            stop.max_iters = sim_max_iters;
            stop.cost_tol = sim_cost_tol;
            stop.u_tol = sim_u_tol;
            vlslab::RunOptions opts;
            opts.stride = sim_stride;
            opts.record_frobenius = true;
            opts.record_states = sim_snapshot_t >= 0;
            const vlslab::Trajectory traj =
                vlslab::run(init, inst, stop, opts, vlslab::Exec::Par);
            emit(sim_out, vlslab::trajectory_csv(traj));
            if (sim_snapshot_t >= 0) {
                const vlslab::VlsState* hit = nullptr;
                for (const auto& s : traj.states)
                    if (s.t == sim_snapshot_t) { hit = &s; break; }
                if (!hit)
                    throw std::invalid_argument(
                        "--snapshot " + std::to_string(sim_snapshot_t) +
                        " was not a recorded iteration (check --stride and the stop rule)");
                const vlslab::ConsensusSnapshot snap =
                    vlslab::build_matrices(*hit, inst, vlslab::Exec::Par);
                emit(sim_snapshot_out, vlslab::snapshot_text(snap));
            }
        } else if (spec->parsed()) {
            const vlslab::RankOneInstance inst = resolve_instance(spec_inst, spec_seed);
            vlslab::SpectralReport rep = vlslab::analyze_instance(inst, vlslab::Exec::Par);
            if (spec_inst.instance_file.empty() && spec_inst.edges_file.empty())
                rep.family = spec_inst.family;
            emit(spec_out, vlslab::spectral_csv({rep}));
        } else if (bnd->parsed()) {
            const double main_bound = vlslab::theorem2_bound(bnd_n, bnd_delta, bnd_b);
            const double weak = vlslab::theorem2_bound_weak(bnd_n, bnd_b);
            const double b2 = bnd_b * bnd_b, b4 = b2 * b2, b8 = b4 * b4;
            const double floor = -1.0 + b8 / static_cast<double>(bnd_delta);
            std::string csv = "n,delta,b,theorem2_bound,theorem2_weak_bound,gershgorin_floor\n";
            csv += vlslab::fmt_double(bnd_n) + ',' + vlslab::fmt_double(bnd_delta) + ',' +
                   vlslab::fmt_double(bnd_b) + ',' + vlslab::fmt_double(main_bound) + ',' +
                   vlslab::fmt_double(weak) + ',' + vlslab::fmt_double(floor) + '\n';
            emit(bnd_out, csv);
        } else if (expt->parsed()) {
            vlslab::ExperimentConfig cfg = vlslab::load_experiment_config(expt_config);
            if (expt_seed_opt->count() > 0) cfg.seed = expt_seed;
            const std::vector<vlslab::TrialRecord> records = vlslab::run_experiment(cfg);
            vlslab::save_records_csv(expt_out, records);
        } else if (fig->parsed()) {
            const std::vector<vlslab::TrialRecord> records = vlslab::load_records_csv(fig_records);
            const vlslab::FigureKind kind = fig_kind == "eta_vs_n" ? vlslab::FigureKind::eta_vs_n
                                                                   : vlslab::FigureKind::eta_vs_b;
            const std::vector<vlslab::FigureRow> rows = vlslab::figure_data(records, kind);
            emit(fig_out, vlslab::figure_csv(rows, kind));
        }
    } catch (const vlslab::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
