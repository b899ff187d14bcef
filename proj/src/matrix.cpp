#include "vlslab/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace vlslab {

namespace {

inline void mul_row(const Mat& a, const Mat& b, Mat& out, int i) {
    const int n = b.cols();
    const int k_end = a.cols();
    double* ci = out.row(i);
    for (int j = 0; j < n; ++j) ci[j] = 0.0;
    const double* ai = a.row(i);
    for (int k = 0; k < k_end; ++k) {
        const double aik = ai[k];
        const double* bk = b.row(k);
        for (int j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
}

} // namespace

void mat_mul(const Mat& a, const Mat& b, Mat& out, Exec ex) {
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: inner dimensions differ");
    if (out.rows() != a.rows() || out.cols() != b.cols()) out = Mat(a.rows(), b.cols());
    const int m = a.rows();
    if (ex == Exec::Par) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < m; ++i) mul_row(a, b, out, i);
    } else {
        for (int i = 0; i < m; ++i) mul_row(a, b, out, i);
    }
}

double max_abs_diff(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    const std::size_t total = static_cast<std::size_t>(a.rows()) * a.cols();
    for (std::size_t i = 0; i < total; ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

double frobenius_norm(const Mat& a) {
    double s = 0.0;
    const std::size_t total = static_cast<std::size_t>(a.rows()) * a.cols();
    for (std::size_t i = 0; i < total; ++i) s += a.data()[i] * a.data()[i];
    return std::sqrt(s);
}

} // namespace vlslab
