#include "vlslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vlslab/consensus.hpp"
#include "vlslab/errors.hpp"
#include "vlslab/graph.hpp"
#include "vlslab/vls.hpp"

namespace vlslab {

std::pair<Mat, std::vector<double>> limit_matrix(const RankOneInstance& inst, Exec exec) {
    const int n = inst.n();
    VlsState fixed;
    fixed.x = inst.alpha();
    fixed.y = inst.beta();
    Mat p = closed_form_p(fixed, inst, exec);

    // pi_hat_i = alpha_i x_i sum_{k:i~k} y_k^2 at the fixed point.
    std::vector<double> pi(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double den = 0.0;
        for (int l : inst.graph().row_neighbors(i)) den += inst.beta()[l] * inst.beta()[l];
        pi[i] = inst.alpha()[i] * inst.alpha()[i] * den;
        total += pi[i];
    }
    for (int i = 0; i < n; ++i) pi[i] /= total;
    return {std::move(p), std::move(pi)};
}

namespace {

double off_diagonal_norm(const Mat& a) {
    const int n = a.rows();
    double s = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(s);
}

} // namespace

EigResult jacobi_eigen(Mat a, const JacobiOptions& opts) {
    const int n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("jacobi_eigen: matrix must be square");
    if (opts.max_sweeps < 1 || !(opts.off_tol > 0.0))
        throw std::invalid_argument("jacobi_eigen: invalid options");
    Mat v = Mat::identity(n);
    const double scale = std::max(1.0, frobenius_norm(a));

    int sweeps = 0;
    while (off_diagonal_norm(a) > opts.off_tol * scale) {
        if (++sweeps > opts.max_sweeps)
            throw NumericalError("jacobi_eigen: no convergence within the sweep budget");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                // Large theta would overflow theta^2; the series limit is fine.
                const double t = std::abs(theta) > 1e154
                                     ? 1.0 / (2.0 * theta)
                                     : std::copysign(1.0, theta) /
                                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k != p && k != q) {
                        const double akp = a(k, p), akq = a(k, q);
                        a(k, p) = a(p, k) = c * akp - s * akq;
                        a(k, q) = a(q, k) = s * akp + c * akq;
                    }
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });
    EigResult r;
    r.values.resize(n);
    r.vectors = Mat(n, n);
    for (int k = 0; k < n; ++k) {
        r.values[k] = a(order[k], order[k]);
        for (int i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
    }
    return r;
}

EigResult eig_reversible(const Mat& p, const std::vector<double>& pi, const JacobiOptions& opts) {
    const int n = p.rows();
    if (p.cols() != n || static_cast<int>(pi.size()) != n)
        throw std::invalid_argument("eig_reversible: shape mismatch");
    double pisum = 0.0;
    for (double w : pi) {
        if (!(w > 0.0)) throw std::invalid_argument("eig_reversible: pi must be positive");
        pisum += w;
    }
    if (std::abs(pisum - 1.0) > 1e-10)
        throw std::invalid_argument("eig_reversible: pi must sum to 1");
    if (detailed_balance_residual(p, pi) > 1e-10)
        throw NumericalError("eig_reversible: matrix is not reversible for pi");

    std::vector<double> sq(n);
    for (int i = 0; i < n; ++i) sq[i] = std::sqrt(pi[i]);
    Mat s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(i, j) = sq[i] * p(i, j) / sq[j];
    // Detailed balance makes S symmetric up to roundoff; average the residue
    // away so Jacobi sees an exactly symmetric matrix.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double m = 0.5 * (s(i, j) + s(j, i));
            s(i, j) = s(j, i) = m;
        }

    EigResult r = jacobi_eigen(std::move(s), opts);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) r.vectors(i, k) /= sq[i];
        int arg = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(r.vectors(i, k)) > std::abs(r.vectors(arg, k))) arg = i;
        if (r.vectors(arg, k) < 0.0)
            for (int i = 0; i < n; ++i) r.vectors(i, k) = -r.vectors(i, k);
    }
    return r;
}

double dirichlet_form(const Mat& p, const std::vector<double>& pi, const std::vector<double>& x) {
    const int n = p.rows();
    if (p.cols() != n || static_cast<int>(pi.size()) != n || static_cast<int>(x.size()) != n)
        throw std::invalid_argument("dirichlet_form: shape mismatch");
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double d = x[i] - x[j];
            s += pi[i] * p(i, j) * d * d;
        }
    return s;
}

namespace {

DirichletGap dirichlet_from_eig(const Mat& p, const std::vector<double>& pi, const EigResult& eig) {
    const int n = p.rows();
    std::vector<double> z2(n);
    for (int i = 0; i < n; ++i) z2[i] = eig.vectors(i, 1);
    DirichletGap g;
    g.gap = 1.0 - eig.values[1];
    g.raw_form = dirichlet_form(p, pi, z2);
    if (std::abs(g.raw_form - 2.0 * g.gap) > 1e-8)
        throw NumericalError("dirichlet_gap: form does not match 2(1 - lambda2)");
    return g;
}

} // namespace

DirichletGap dirichlet_gap(const Mat& p, const std::vector<double>& pi, const JacobiOptions& opts) {
    if (p.rows() < 2) throw std::invalid_argument("dirichlet_gap: needs n >= 2");
    return dirichlet_from_eig(p, pi, eig_reversible(p, pi, opts));
}

double theorem2_bound(int n, int delta, double b) {
    if (n < 2 || delta < 1 || !(b > 0.0 && b < 1.0))
        throw std::invalid_argument("theorem2_bound: need n >= 2, delta >= 1, b in (0,1)");
    const double b2 = b * b, b4 = b2 * b2, b8 = b4 * b4;
    return 1.0 - (b8 * b4) / (static_cast<double>(n) * (n - 1.0) * delta);
}

double theorem2_bound_weak(int n, double b) {
    if (n < 2 || !(b > 0.0 && b < 1.0))
        throw std::invalid_argument("theorem2_bound_weak: need n >= 2, b in (0,1)");
    const double b2 = b * b, b4 = b2 * b2, b8 = b4 * b4;
    const double nd = static_cast<double>(n);
    return 1.0 - (b8 * b4) / (nd * nd * nd);
}

GershgorinFloor gershgorin_floor(const Mat& p, int delta, double b) {
    const int n = p.rows();
    if (p.cols() != n || n < 1) throw std::invalid_argument("gershgorin_floor: bad matrix");
    if (delta < 1 || !(b > 0.0 && b < 1.0))
        throw std::invalid_argument("gershgorin_floor: need delta >= 1, b in (0,1)");
    double diag_min = p(0, 0);
    for (int i = 1; i < n; ++i) diag_min = std::min(diag_min, p(i, i));
    const double b2 = b * b, b4 = b2 * b2, b8 = b4 * b4;
    GershgorinFloor f;
    f.analytic = -1.0 + b8 / delta;
    f.empirical = -1.0 + diag_min;
    if (diag_min < (b8 / delta) * (1.0 - 1e-12))
        throw NumericalError("gershgorin_floor: diagonal below the guaranteed b^8/delta floor");
    return f;
}

SpectralReport analyze_instance(const RankOneInstance& inst, Exec exec) {
    const int n = inst.n();
    if (n < 2) throw std::invalid_argument("analyze_instance: needs n >= 2");
    const GraphStats stats = graph_stats(inst.graph());

    auto [p, pi] = limit_matrix(inst, exec);
    const EigResult eig = eig_reversible(p, pi);
    if (std::abs(eig.values.front() - 1.0) > 1e-10)
        throw NumericalError("analyze_instance: principal eigenvalue is not 1");

    SpectralReport r;
    r.n = n;
    r.b = inst.b();
    r.delta = stats.max_degree;
    r.diameter = stats.diameter;
    r.lambda2 = eig.values[1];
    r.lambda_n = eig.values.back();
    r.rho = std::max(r.lambda2, -r.lambda_n);
    const DirichletGap dg = dirichlet_from_eig(p, pi, eig);
    r.dirichlet_gap = dg.gap;
    r.dirichlet_raw = dg.raw_form;
    r.theorem2 = theorem2_bound(n, stats.max_degree, inst.b());
    r.theorem2_weak = theorem2_bound_weak(n, inst.b());
    const GershgorinFloor gf = gershgorin_floor(p, stats.max_degree, inst.b());
    r.gershgorin_analytic = gf.analytic;
    r.gershgorin_empirical = gf.empirical;
    r.diag_min = p(0, 0);
    for (int i = 1; i < n; ++i) r.diag_min = std::min(r.diag_min, p(i, i));
    if (r.lambda_n < gf.empirical - 1e-12)
        throw NumericalError("analyze_instance: lambda_n below the Gershgorin floor");
    return r;
}

} // namespace vlslab
