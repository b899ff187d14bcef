#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "vlslab/consensus.hpp"
#include "vlslab/errors.hpp"
#include "vlslab/instance.hpp"
#include "vlslab/rng.hpp"
#include "vlslab/spectral.hpp"
#include "vlslab/vls.hpp"

using namespace vlslab;

namespace {

// Independent 3x3 eigenvalue oracle: trigonometric solution of the
// characteristic cubic. Valid for matrices similar to a symmetric one (all
// roots real), which covers the reversible P here.
std::array<double, 3> char_poly_roots(const Mat& m) {
    const double tr = m(0, 0) + m(1, 1) + m(2, 2);
    const double m2 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                      m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    const double det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                       m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                       m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    // lambda^3 + a2 lambda^2 + a1 lambda + a0
    const double a2 = -tr, a1 = m2, a0 = -det;
    const double p = a1 - a2 * a2 / 3.0;
    const double q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    const double s = 2.0 * std::sqrt(std::max(-p / 3.0, 0.0));
    double arg = s > 0.0 ? 3.0 * q / (p * s) : 0.0;
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    std::array<double, 3> r;
    for (int k = 0; k < 3; ++k)
        r[k] = s * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - a2 / 3.0;
    std::sort(r.rbegin(), r.rend());
    return r;
}

std::vector<double> feasible_vector(Rng& rng, const std::vector<double>& pi) {
    const int n = static_cast<int>(pi.size());
    while (true) {
        std::vector<double> z(n);
        for (auto& e : z) e = rng.uniform(-1.0, 1.0);
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += pi[i] * z[i];
        for (auto& e : z) e -= mean;
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) norm2 += pi[i] * z[i] * z[i];
        if (norm2 < 1e-8) continue;
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& e : z) e *= inv;
        return z;
    }
}

} // namespace

TEST_CASE("jacobi solves small symmetric matrices exactly") {
    const EigResult id = jacobi_eigen(Mat::identity(5));
    for (double v : id.values) CHECK(v == 1.0);

    Mat tri(3, 3);
    tri(0, 0) = tri(1, 1) = tri(2, 2) = 2.0;
    tri(0, 1) = tri(1, 0) = tri(1, 2) = tri(2, 1) = 1.0;
    const EigResult e = jacobi_eigen(tri);
    const double r2 = std::sqrt(2.0);
    CHECK(e.values[0] == doctest::Approx(2.0 + r2).epsilon(1e-13));
    CHECK(e.values[1] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(e.values[2] == doctest::Approx(2.0 - r2).epsilon(1e-13));
    // vectors diagonalize: V^T A V = diag
    for (int k = 0; k < 3; ++k) {
        double resid = 0.0;
        for (int i = 0; i < 3; ++i) {
            double av = 0.0;
            for (int j = 0; j < 3; ++j) av += tri(i, j) * e.vectors(j, k);
            resid = std::max(resid, std::abs(av - e.values[k] * e.vectors(i, k)));
        }
        CHECK(resid <= 1e-12);
    }
}

TEST_CASE("identity chain spectrum is all ones") {
    const std::vector<double> pi(4, 0.25);
    const EigResult e = eig_reversible(Mat::identity(4), pi);
    for (double v : e.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("line n=3 limit spectrum matches the characteristic cubic") {
    const auto inst = sample_instance(generate_family(GraphFamily::line, 3), 0.3, 101);
    const auto [p, pi] = limit_matrix(inst);
    const auto want = char_poly_roots(p);
    const EigResult e = eig_reversible(p, pi);
    for (int k = 0; k < 3; ++k) CHECK(e.values[k] == doctest::Approx(want[k]).epsilon(1e-8));
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("limit matrix is scale invariant and matched by converged runs") {
    const auto inst = sample_instance(generate_family(GraphFamily::line, 6), 0.4, 103);
    VlsState rep;
    rep.x = inst.alpha();
    rep.y = inst.beta();
    VlsState scaled;
    scaled.x = inst.alpha();
    scaled.y = inst.beta();
    for (auto& e : scaled.x) e *= 5.0;
    for (auto& e : scaled.y) e /= 5.0;
    const auto [p, pi] = limit_matrix(inst);
    CHECK(max_abs_diff(p, closed_form_p(rep, inst)) == 0.0);
    CHECK(max_abs_diff(p, closed_form_p(scaled, inst)) <= 1e-12);

    const VlsState init = init_state(inst, 104);
    StopRule stop;
    stop.max_iters = 1'000'000;
    stop.cost_tol = 1e-24;
    const Trajectory traj = run(init, inst, stop);
    REQUIRE(traj.final_cost <= 1e-24);
    const ConsensusSnapshot snap = build_matrices(traj.final_state, inst);
    CHECK(max_abs_diff(p, snap.P) <= 1e-6);
    for (int i = 0; i < 6; ++i) CHECK(snap.pi[i] == doctest::Approx(pi[i]).epsilon(1e-6));
}

TEST_CASE("complete graph limit spectrum degenerates") {
    for (int n : {4, 16}) {
        const auto inst = sample_instance(generate_family(GraphFamily::complete, n), 0.5, 107);
        const auto [p, pi] = limit_matrix(inst);
        const EigResult e = eig_reversible(p, pi);
        CHECK(std::abs(e.values[0] - 1.0) <= 1e-12);
        for (int k = 1; k < n; ++k) CHECK(std::abs(e.values[k]) <= 1e-12);
    }
}

TEST_CASE("eigenpairs satisfy the reversible structure") {
    for (GraphFamily f : {GraphFamily::line, GraphFamily::star, GraphFamily::grid2d,
                          GraphFamily::grid3d}) {
        const auto inst = sample_instance(generate_family(f, 8), 0.3, 109);
        const auto [p, pi] = limit_matrix(inst);
        const EigResult e = eig_reversible(p, pi);
        const int n = 8;
        for (int k = 0; k < n; ++k) {
            // residual against P itself (the 1*pi rank-one part only shifts
            // the principal pair)
            double resid = 0.0, dot = 0.0, norm = 0.0, peak = 0.0, peak_val = 0.0;
            for (int i = 0; i < n; ++i) {
                double pz = 0.0;
                for (int j = 0; j < n; ++j) pz += p(i, j) * e.vectors(j, k);
                resid = std::max(resid, std::abs(pz - e.values[k] * e.vectors(i, k)));
                dot += pi[i] * e.vectors(i, k);
                norm += pi[i] * e.vectors(i, k) * e.vectors(i, k);
                if (std::abs(e.vectors(i, k)) > peak) {
                    peak = std::abs(e.vectors(i, k));
                    peak_val = e.vectors(i, k);
                }
            }
            CHECK(resid <= 1e-8);
            if (k > 0) CHECK(std::abs(dot) <= 1e-8);
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(peak_val > 0.0);
        }
        for (int k = 1; k < n; ++k) CHECK(e.values[k - 1] >= e.values[k]);
    }
}

TEST_CASE("the conjugated matrix is symmetric to roundoff even for tiny b") {
    const auto inst = sample_instance(generate_family(GraphFamily::grid2d, 8), 0.05, 113);
    const auto [p, pi] = limit_matrix(inst);
    double asym = 0.0;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            const double sij = std::sqrt(pi[i] / pi[j]) * p(i, j);
            const double sji = std::sqrt(pi[j] / pi[i]) * p(j, i);
            asym = std::max(asym, std::abs(sij - sji));
        }
    CHECK(asym <= 1e-12);
}

TEST_CASE("eig_reversible rejects non-reversible input") {
    Mat p(2, 2);
    p(0, 0) = 0.9;
    p(0, 1) = 0.1;
    p(1, 0) = 0.5;
    p(1, 1) = 0.5;
    const std::vector<double> pi = {0.5, 0.5};
    CHECK_THROWS_AS(eig_reversible(p, pi), NumericalError);
    CHECK_THROWS_AS(eig_reversible(Mat::identity(2), std::vector<double>{0.7, 0.7}),
                    std::invalid_argument);
    CHECK_THROWS_AS(eig_reversible(Mat::identity(2), std::vector<double>{1.4, -0.4}),
                    std::invalid_argument);
}

TEST_CASE("dirichlet form matches the gap and is minimized by the eigenvector") {
    Rng rng(117);
    for (GraphFamily f : {GraphFamily::line, GraphFamily::grid3d}) {
        const auto inst = sample_instance(generate_family(f, 8), 0.3, 119);
        const auto [p, pi] = limit_matrix(inst);
        const EigResult e = eig_reversible(p, pi);
        const DirichletGap dg = dirichlet_gap(p, pi);
        CHECK(dg.gap == doctest::Approx(1.0 - e.values[1]).epsilon(1e-10));
        CHECK(std::abs(dg.raw_form - 2.0 * (1.0 - e.values[1])) <= 1e-8);
        for (int trial = 0; trial < 100; ++trial) {
            const auto z = feasible_vector(rng, pi);
            CHECK(dirichlet_form(p, pi, z) >= dg.raw_form - 1e-9);
        }
    }
    const auto comp = sample_instance(generate_family(GraphFamily::complete, 8), 0.3, 121);
    const auto [pc, pic] = limit_matrix(comp);
    CHECK(dirichlet_gap(pc, pic).gap == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("theorem2_bound evaluates to its frozen values") {
    CHECK(std::abs(theorem2_bound(32, 32, 0.3) - 0.9999999999832585) <= 5e-16);
    CHECK(std::abs((1.0 - theorem2_bound(32, 32, 0.3)) - 1.6742e-11) <= 1e-14);
    CHECK(theorem2_bound(2, 1, 0.5) == 1.0 - 1.0 / 8192.0);
    CHECK(std::abs(theorem2_bound_weak(32, 0.3) - 0.9999999999837818) <= 5e-16);
    // b -> 1 limit approaches the pure counting bound
    CHECK(std::abs(theorem2_bound(8, 4, 0.999999) - (1.0 - 1.0 / 224.0)) <= 1e-6);
    // the sharp bound is at least as strong whenever delta <= n
    for (int n : {2, 4, 8, 32})
        for (int delta = 1; delta <= n; ++delta)
            for (double b : {0.05, 0.3, 0.9})
                CHECK(theorem2_bound(n, delta, b) <= theorem2_bound_weak(n, b));
    CHECK_THROWS_AS(theorem2_bound(1, 1, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(theorem2_bound(4, 0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(theorem2_bound(4, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(theorem2_bound_weak(4, 0.0), std::invalid_argument);
}

TEST_CASE("gershgorin floors") {
    // all-ones factors on K_{8,8}: P is exactly the averaging matrix
    const auto g = generate_family(GraphFamily::complete, 8);
    const std::vector<double> ones(8, 1.0);
    const RankOneInstance inst(g, 0.9, ones, ones);
    const auto [p, pi] = limit_matrix(inst);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) CHECK(p(i, j) == 0.125);
    const GershgorinFloor f = gershgorin_floor(p, 8, 0.9);
    CHECK(f.empirical == -0.875);
    CHECK(f.analytic < f.empirical);

    Mat bad(2, 2);
    bad(0, 0) = 0.1;
    bad(0, 1) = 0.9;
    bad(1, 0) = 0.9;
    bad(1, 1) = 0.1;
    CHECK_THROWS_AS(gershgorin_floor(bad, 1, 0.9), NumericalError);

    Mat one(1, 1);
    one(0, 0) = 1.0;
    const GershgorinFloor f1 = gershgorin_floor(one, 1, 0.5);
    CHECK(f1.empirical == 0.0);
    CHECK(f1.analytic == doctest::Approx(-1.0 + std::pow(0.5, 8)).epsilon(1e-15));
}

TEST_CASE("analyze_instance ties the report together") {
    const auto inst = sample_instance(generate_family(GraphFamily::grid2d, 8), 0.3, 127);
    const SpectralReport r = analyze_instance(inst);
    CHECK(r.n == 8);
    CHECK(r.b == 0.3);
    CHECK(r.delta >= 1);
    CHECK(r.diameter >= 1);
    CHECK(r.lambda2 < 1.0);
    CHECK(r.lambda_n > -1.0);
    CHECK(r.rho == std::max(r.lambda2, -r.lambda_n));
    CHECK(r.lambda2 < r.theorem2);
    CHECK(r.theorem2 <= r.theorem2_weak);
    CHECK(r.lambda_n > r.gershgorin_analytic);
    CHECK(r.gershgorin_empirical == -1.0 + r.diag_min);
    CHECK(r.dirichlet_gap == doctest::Approx(1.0 - r.lambda2).epsilon(1e-12));
    CHECK(std::abs(r.dirichlet_raw - 2.0 * (1.0 - r.lambda2)) <= 1e-8);
    const double b4 = 0.3 * 0.3 * 0.3 * 0.3;
    CHECK(r.diag_min >= b4 * b4 / r.delta);

    const RevealedGraph loner(1, {{0, 0}});
    const RankOneInstance tiny(loner, 0.5, {1.0}, {1.0});
    CHECK_THROWS_AS(analyze_instance(tiny), std::invalid_argument);
}
