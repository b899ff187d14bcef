// Serial vs parallel kernel timings. The parallel paths are designed to be
// bit-identical to the serial references, so each row also prints the max
// absolute difference between the two results (expected to be exactly 0).
//
// Usage: vlslab_bench [threads]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "vlslab/consensus.hpp"
#include "vlslab/instance.hpp"
#include "vlslab/io.hpp"
#include "vlslab/matrix.hpp"
#include "vlslab/parallel.hpp"
#include "vlslab/ratelab.hpp"
#include "vlslab/rng.hpp"
#include "vlslab/vls.hpp"

using namespace vlslab;

namespace {

template <class F>
double time_ms(F&& f, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, int n, double ser_ms, double par_ms, double diff) {
    std::printf("%-18s %6d %12.3f %12.3f %9.2fx %12.3e\n", name, n, ser_ms, par_ms,
                par_ms > 0 ? ser_ms / par_ms : 0.0, diff);
}

Mat random_mat(int rows, int cols, std::uint64_t seed) {
    Mat m(rows, cols);
    Rng rng(seed);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    return m;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

int main(int argc, char** argv) {
    set_max_threads(argc > 1 ? std::atoi(argv[1]) : 0);
    std::printf("openmp=%s threads=%d\n", openmp_enabled() ? "on" : "off", max_threads());
    std::printf("%-18s %6s %12s %12s %9s %12s\n", "kernel", "n", "serial_ms", "par_ms",
                "speedup", "max|diff|");

    { // dense matrix product
        const int n = 320;
        const Mat a = random_mat(n, n, 11), b = random_mat(n, n, 12);
        Mat ser, par;
        const double ts = time_ms([&] { mat_mul(a, b, ser, Exec::Serial); });
        const double tp = time_ms([&] { mat_mul(a, b, par, Exec::Par); });
        row("mat_mul", n, ts, tp, max_abs_diff(ser, par));
    }

    { // consensus matrix entries
        const int n = 160;
        const auto inst = sample_instance(generate_family(GraphFamily::complete, n), 0.3, 21);
        const VlsState st = init_state(inst, 22);
        Mat ser, par;
        const double ts = time_ms([&] { ser = closed_form_p(st, inst, Exec::Serial); });
        const double tp = time_ms([&] { par = closed_form_p(st, inst, Exec::Par); });
        row("closed_form_p", n, ts, tp, max_abs_diff(ser, par));
    }

    { // revealed cost and full frobenius error
        const int n = 2048;
        const auto inst = sample_instance(generate_family(GraphFamily::complete, n), 0.3, 31);
        const VlsState st = init_state(inst, 32);
        double cs = 0, cp = 0, fs = 0, fp = 0;
        const double ts = time_ms([&] { cs = project_revealed(st.x, st.y, inst, Exec::Serial); });
        const double tp = time_ms([&] { cp = project_revealed(st.x, st.y, inst, Exec::Par); });
        row("project_revealed", n, ts, tp, std::abs(cs - cp));
        const double tfs = time_ms([&] { fs = frobenius_error(st.x, st.y, inst, Exec::Serial); });
        const double tfp = time_ms([&] { fp = frobenius_error(st.x, st.y, inst, Exec::Par); });
        row("frobenius_error", n, tfs, tfp, std::abs(fs - fp));
    }

    { // VLS iterations on a long line graph
        const int n = 4096;
        const auto inst = sample_instance(generate_family(GraphFamily::line, n), 0.3, 41);
        const VlsState init = init_state(inst, 42);
        StopRule stop;
        stop.max_iters = 400;
        stop.cost_tol = -1.0;
        RunOptions opts;
        opts.stride = 400;
        Trajectory ser, par;
        const double ts = time_ms([&] { ser = run(init, inst, stop, opts, Exec::Serial); }, 2);
        const double tp = time_ms([&] { par = run(init, inst, stop, opts, Exec::Par); }, 2);
        const double d = std::max(max_diff(ser.final_state.x, par.final_state.x),
                                  std::abs(ser.final_cost - par.final_cost));
        row("vls_run_400", n, ts, tp, d);
    }

    { // whole trial batch (parallel across trials)
        ExperimentConfig cfg;
        cfg.family = GraphFamily::line;
        cfg.n_values = {24};
        cfg.b_values = {0.3};
        cfg.trials = 8;
        cfg.max_iters = 200'000;
        cfg.stride = 4;
        const int save = max_threads();
        set_max_threads(1);
        std::vector<TrialRecord> ser, par;
        const double ts = time_ms([&] { ser = run_experiment(cfg); }, 1);
        set_max_threads(save);
        const double tp = time_ms([&] { par = run_experiment(cfg); }, 1);
        const double d = records_csv(ser) == records_csv(par) ? 0.0 : 1.0;
        row("experiment_8x", 24, ts, tp, d);
    }
    return 0;
}
