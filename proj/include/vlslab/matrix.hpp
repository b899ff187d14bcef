#pragma once

#include <cassert>
#include <vector>

#include "vlslab/parallel.hpp"

namespace vlslab {

// Dense row-major matrix. The problem sizes here are desk scale (n up to a
// few thousand), so dense storage is used throughout.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return a_[static_cast<std::size_t>(i) * cols_ + j];
    }
    double operator()(int i, int j) const {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return a_[static_cast<std::size_t>(i) * cols_ + j];
    }

    double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * cols_; }
    const double* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * cols_; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    bool operator==(const Mat& other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

// out = a * b. The Par path splits rows across threads; each output row is
// computed by exactly one thread with the same inner loop as the serial
// path, so both executions agree bitwise.
void mat_mul(const Mat& a, const Mat& b, Mat& out, Exec ex = Exec::Par);

double max_abs_diff(const Mat& a, const Mat& b);
double frobenius_norm(const Mat& a);

} // namespace vlslab
