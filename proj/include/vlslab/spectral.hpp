#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vlslab/instance.hpp"
#include "vlslab/matrix.hpp"
#include "vlslab/parallel.hpp"

namespace vlslab {

// Limit of the consensus matrices P_t: substitute x = alpha, y = beta into
// the closed-form entries (the c = 1 representative; every c > 0 gives the
// same matrix since the c powers cancel). Also returns the stationary
// probability vector.
std::pair<Mat, std::vector<double>> limit_matrix(const RankOneInstance& inst,
                                                 Exec exec = Exec::Serial);

struct JacobiOptions {
    // Stop once the off-diagonal Frobenius norm is <= off_tol * max(1, ||S||_F).
    double off_tol = 1e-12;
    int max_sweeps = 100;
};

struct EigResult {
    std::vector<double> values; // descending
    Mat vectors;                // column k pairs with values[k]
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Throws
// NumericalError when the sweep budget is exhausted.
EigResult jacobi_eigen(Mat s, const JacobiOptions& opts = {});

// Spectrum of a reversible stochastic matrix through the symmetric conjugate
// S = D^{1/2} P D^{-1/2}, D = diag(pi). Requires detailed balance within
// 1e-10. Eigenvalues are real and descending; eigenvectors are returned
// pi-orthonormal (so pi^T z = 0 for every non-principal one), each with its
// largest-magnitude entry made positive for reproducibility.
EigResult eig_reversible(const Mat& p, const std::vector<double>& pi,
                         const JacobiOptions& opts = {});

// sum_i sum_j pi_i p_ij (x_i - x_j)^2.
double dirichlet_form(const Mat& p, const std::vector<double>& pi, const std::vector<double>& x);

// The variational characterization of the spectral gap. raw_form is the
// Dirichlet form at the second eigenvector (pi-mean zero, pi-norm one); it
// equals 2 * (1 - lambda2), and the two are cross-checked to 1e-8.
struct DirichletGap {
    double gap = 0.0;
    double raw_form = 0.0;
};
DirichletGap dirichlet_gap(const Mat& p, const std::vector<double>& pi,
                           const JacobiOptions& opts = {});

// 1 - b^12 / (n (n-1) delta); requires n >= 2, delta >= 1, b in (0,1).
double theorem2_bound(int n, int delta, double b);
// The weaker 1 - b^12 / n^3 form, reported alongside the sharp one.
double theorem2_bound_weak(int n, double b);

// Eigenvalue floors from Gershgorin disks of a stochastic matrix with
// positive diagonal: analytic = -1 + b^8/delta, empirical = -1 + min_i P_ii.
// Verifies min_i P_ii >= b^8/delta, which Theorem-2-valid states guarantee.
struct GershgorinFloor {
    double analytic = 0.0;
    double empirical = 0.0;
};
GershgorinFloor gershgorin_floor(const Mat& p, int delta, double b);

struct SpectralReport {
    int n = 0;
    std::string family = "custom";
    double b = 0.0;
    int delta = 0;
    int diameter = 0;
    double lambda2 = 0.0;
    double lambda_n = 0.0;
    double rho = 0.0; // max(lambda2, -lambda_n)
    double dirichlet_gap = 0.0;
    double dirichlet_raw = 0.0;
    double theorem2 = 0.0;
    double theorem2_weak = 0.0;
    double gershgorin_analytic = 0.0;
    double gershgorin_empirical = 0.0;
    double diag_min = 0.0;
};

// Full spectral workup of one instance's limit matrix. Requires n >= 2 and a
// connected graph. Validates lambda1 = 1 within 1e-10 and the internal
// consistency of the report (rho identity, Dirichlet identity, floors).
SpectralReport analyze_instance(const RankOneInstance& inst, Exec exec = Exec::Serial);

} // namespace vlslab
