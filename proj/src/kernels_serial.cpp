// kernels_serial.cpp — Reference implementations; the OpenMP kernels must match these bitwise.

#include "sqz/kernels.hpp"
#include "sqz/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sqz::kernels::detail {

void spmm_left_serial(cd alpha, const SparseMatrix& A, const Matrix& X, Matrix& Y, bool accumulate) {
    const Eigen::Index n = A.rows();
    const Eigen::Index cols = X.cols();
    if (A.cols() != X.rows() || Y.rows() != n || Y.cols() != cols)
        throw InvalidArgumentError("spmm_left: dimension mismatch");
    for (Eigen::Index j = 0; j < cols; ++j) {
        cd* y = Y.data() + j * n;
        if (!accumulate) std::fill(y, y + n, cd{0.0, 0.0});
        const cd* x = X.data() + j * X.rows();
        for (Eigen::Index k = 0; k < A.outerSize(); ++k) {
            const cd xk = alpha * x[k];
            if (xk == cd{0.0, 0.0}) continue;
            for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
                y[it.row()] += it.value() * xk;
            }
        }
    }
}

void spmm_right_serial(cd alpha, const Matrix& X, const SparseMatrix& B, Matrix& Y, bool accumulate) {
    const Eigen::Index n = X.rows();
    const Eigen::Index cols = B.cols();
    if (X.cols() != B.rows() || Y.rows() != n || Y.cols() != cols)
        throw InvalidArgumentError("spmm_right: dimension mismatch");
    for (Eigen::Index j = 0; j < cols; ++j) {
        cd* y = Y.data() + j * n;
        if (!accumulate) std::fill(y, y + n, cd{0.0, 0.0});
        for (SparseMatrix::InnerIterator it(B, j); it; ++it) {
            const cd w = alpha * it.value();
            const cd* x = X.data() + it.row() * n;
            for (Eigen::Index i = 0; i < n; ++i) y[i] += w * x[i];
        }
    }
}

void stage_combine_serial(Matrix& out, const Matrix& y, double h,
                          std::span<const double> coeff, std::span<const Matrix* const> k) {
    const Eigen::Index n = y.rows();
    const Eigen::Index cols = y.cols();
    out.resize(n, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        cd* o = out.data() + j * n;
        const cd* yy = y.data() + j * n;
        for (Eigen::Index i = 0; i < n; ++i) o[i] = yy[i];
        for (std::size_t s = 0; s < coeff.size(); ++s) {
            if (coeff[s] == 0.0) continue;
            const double w = h * coeff[s];
            const cd* kk = k[s]->data() + j * n;
            for (Eigen::Index i = 0; i < n; ++i) o[i] += w * kk[i];
        }
    }
}

void wrms_partials_serial(const Matrix& err, const Matrix& y0, const Matrix& y1,
                          double atol, double rtol, double* partials) {
    const Eigen::Index n = err.rows();
    const Eigen::Index cols = err.cols();
    for (Eigen::Index j = 0; j < cols; ++j) {
        const cd* e = err.data() + j * n;
        const cd* a = y0.data() + j * n;
        const cd* b = y1.data() + j * n;
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double scale = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
            const double r = std::abs(e[i]) / scale;
            acc += r * r;
        }
        partials[j] = acc;
    }
}

}  // namespace sqz::kernels::detail
