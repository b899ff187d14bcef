#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vlslab/consensus.hpp"
#include "vlslab/errors.hpp"
#include "vlslab/instance.hpp"
#include "vlslab/vls.hpp"

using namespace vlslab;

namespace {
Trajectory short_run(const RankOneInstance& inst, std::uint64_t init_seed, std::int64_t iters) {
    const VlsState init = init_state(inst, init_seed);
    StopRule stop;
    stop.max_iters = iters;
    stop.cost_tol = -1.0; // keep stepping; these checks want full trajectories
    RunOptions opts;
    opts.record_states = true;
    return run(init, inst, stop, opts);
}
} // namespace

TEST_CASE("lifting the true factors gives the all-ones pair") {
    const auto inst = sample_instance(generate_family(GraphFamily::grid2d, 8), 0.3, 61);
    VlsState s;
    s.x = inst.alpha();
    s.y = inst.beta();
    const auto [u, v] = lift(s, inst);
    for (double e : u) CHECK(e == 1.0);
    for (double e : v) CHECK(e == 1.0);

    VlsState scaled;
    scaled.x = inst.alpha();
    scaled.y = inst.beta();
    for (auto& e : scaled.x) e *= 3.0;
    for (auto& e : scaled.y) e /= 3.0;
    const auto [us, vs] = lift(scaled, inst);
    for (double e : us) CHECK(e == doctest::Approx(3.0).epsilon(1e-15));
    for (double e : vs) CHECK(e == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("consensus matrices are stochastic and reversible at random states") {
    for (GraphFamily f : {GraphFamily::line, GraphFamily::star, GraphFamily::grid2d,
                          GraphFamily::grid3d, GraphFamily::complete}) {
        const auto inst = sample_instance(generate_family(f, 8), 0.3, 67);
        const VlsState s1 = step(init_state(inst, 68), inst); // a reachable state
        const ConsensusSnapshot snap = build_matrices(s1, inst);
        CHECK(row_sum_residual(snap.B) <= 1e-12);
        CHECK(row_sum_residual(snap.C) <= 1e-12);
        CHECK(row_sum_residual(snap.P) <= 1e-12);
        CHECK(detailed_balance_residual(snap.P, snap.pi) <= 1e-12);
        double pi_sum = 0.0;
        for (double p : snap.pi) {
            CHECK(p > 0.0);
            pi_sum += p;
        }
        CHECK(pi_sum == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("product and closed form agree") {
    const auto inst = sample_instance(generate_family(GraphFamily::line, 3), 0.4, 71);
    const VlsState s = init_state(inst, 72);
    const ConsensusSnapshot snap = build_matrices(s, inst);
    const Mat direct = closed_form_p(s, inst);
    CHECK(max_abs_diff(snap.P, direct) <= 1e-12);
    Mat prod;
    mat_mul(snap.B, snap.C, prod, Exec::Serial);
    CHECK(max_abs_diff(snap.P, prod) == 0.0);
}

TEST_CASE("P support equals the row projection graph") {
    const auto inst = sample_instance(generate_family(GraphFamily::line, 4), 0.3, 73);
    const VlsState s = init_state(inst, 74);
    const Mat p = closed_form_p(s, inst);
    const auto proj = project_rows(inst.graph());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK((p(i, j) > 0.0) == proj.has_edge(i, j)); // structural zeros are exact
}

TEST_CASE("complete graphs give the rank-one consensus matrix") {
    const auto inst = sample_instance(generate_family(GraphFamily::complete, 8), 0.5, 79);
    VlsState s;
    s.x = inst.alpha();
    s.y = inst.beta();
    for (auto& e : s.x) e *= 2.0; // same matrix anywhere on the scaling family
    for (auto& e : s.y) e /= 2.0;
    const ConsensusSnapshot snap = build_matrices(s, inst);
    double sa = 0.0;
    for (double a : inst.alpha()) sa += a * a;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            CHECK(std::abs(snap.P(i, j) - inst.alpha()[j] * inst.alpha()[j] / sa) <= 1e-12);
    for (int i = 0; i < 8; ++i)
        CHECK(snap.pi[i] == doctest::Approx(inst.alpha()[i] * inst.alpha()[i] / sa).epsilon(1e-13));
}

TEST_CASE("n=1 collapses to the trivial chain") {
    const RevealedGraph g(1, {{0, 0}});
    const RankOneInstance inst(g, 0.5, {1.5}, {0.8});
    const VlsState s = init_state(inst, 81);
    const ConsensusSnapshot snap = build_matrices(s, inst);
    CHECK(snap.P.rows() == 1);
    CHECK(snap.P(0, 0) == 1.0);
    CHECK(snap.B(0, 0) == 1.0);
    CHECK(snap.C(0, 0) == 1.0);
    CHECK(snap.pi == std::vector<double>{1.0});
}

TEST_CASE("the matrix recursion reproduces the engine") {
    for (GraphFamily f : {GraphFamily::line, GraphFamily::star, GraphFamily::grid2d,
                          GraphFamily::grid3d, GraphFamily::complete}) {
        const int n = f == GraphFamily::grid3d ? 16 : 12;
        const auto inst = sample_instance(generate_family(f, n), 0.3, 83);
        const Trajectory traj = short_run(inst, 84, 100);
        const DynamicsCheck chk = verify_dynamics(traj, inst);
        CHECK(chk.ok);
        CHECK(chk.max_residual <= 1e-10);
        CHECK(chk.max_db_residual <= 1e-12);
        CHECK(chk.max_rowsum_residual <= 1e-12);
        CHECK(chk.max_hull_violation <= 1e-12);
    }
}

TEST_CASE("exact initialization leaves consensus parked at one") {
    const auto inst = sample_instance(generate_family(GraphFamily::grid2d, 8), 0.4, 87);
    const VlsState init = init_state(inst, inst.alpha(), inst.beta());
    StopRule stop;
    stop.max_iters = 30;
    stop.cost_tol = -1.0;
    RunOptions opts;
    opts.record_states = true;
    const Trajectory traj = run(init, inst, stop, opts);
    const DynamicsCheck chk = verify_dynamics(traj, inst);
    CHECK(chk.ok);
    CHECK(chk.max_residual <= 1e-13);
    CHECK(chk.max_hull_violation <= 1e-13);
}

TEST_CASE("complete graphs reach consensus after one step") {
    const auto inst = sample_instance(generate_family(GraphFamily::complete, 8), 0.3, 91);
    const Trajectory traj = short_run(inst, 92, 3);
    REQUIRE(traj.states.size() >= 3);
    const auto [u1, v1] = lift(traj.states[1], inst);
    const auto [u2, v2] = lift(traj.states[2], inst);
    double spread1 = 0.0;
    for (double e : u1) spread1 = std::max(spread1, std::abs(e - u1[0]));
    CHECK(spread1 <= 1e-12 * std::abs(u1[0]));
    for (int i = 0; i < 8; ++i) CHECK(u2[i] == doctest::Approx(u1[i]).epsilon(1e-12));
}

TEST_CASE("verify_dynamics rejects unusable trajectories") {
    const auto inst = sample_instance(generate_family(GraphFamily::line, 4), 0.3, 93);
    const VlsState init = init_state(inst, 94);
    StopRule stop;
    stop.max_iters = 10;
    stop.cost_tol = -1.0;

    RunOptions no_states; // states not recorded
    const Trajectory t1 = run(init, inst, stop, no_states);
    CHECK_THROWS_AS(verify_dynamics(t1, inst), std::invalid_argument);

    RunOptions strided;
    strided.stride = 2;
    strided.record_states = true;
    const Trajectory t2 = run(init, inst, stop, strided);
    CHECK_THROWS_AS(verify_dynamics(t2, inst), std::invalid_argument);
}

TEST_CASE("degenerate states are refused with a numerical error") {
    const auto inst = sample_instance(generate_family(GraphFamily::line, 3), 0.3, 95);
    VlsState s;
    s.x = {0.0, 0.0, 0.0}; // column weights collapse
    s.y = inst.beta();
    CHECK_THROWS_AS(build_matrices(s, inst), NumericalError);
}
