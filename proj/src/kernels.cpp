// kernels.cpp — Backend dispatch.

#include "sqz/kernels.hpp"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sqz::kernels {

namespace {
int g_threads = 0;  // 0 → OpenMP default
// Below this many output columns the parallel fork is not worth it.
constexpr Eigen::Index kMinParallelCols = 64;
}  // namespace

void set_threads(int n) {
    g_threads = n;
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#endif
}

int max_threads() {
#ifdef _OPENMP
    return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
    return 1;
#endif
}

bool in_parallel() {
#ifdef _OPENMP
    return omp_in_parallel() != 0;
#else
    return false;
#endif
}

Backend resolve(Backend b, Eigen::Index work_items) {
    if (b != Backend::automatic) return b;
#ifdef _OPENMP
    if (!in_parallel() && work_items >= kMinParallelCols && max_threads() > 1) return Backend::openmp;
#endif
    (void)work_items;
    return Backend::serial;
}

void spmm_left(cd alpha, const SparseMatrix& A, const Matrix& X, Matrix& Y,
               bool accumulate, Backend backend) {
    if (resolve(backend, X.cols()) == Backend::openmp)
        detail::spmm_left_omp(alpha, A, X, Y, accumulate);
    else
        detail::spmm_left_serial(alpha, A, X, Y, accumulate);
}

void spmm_right(cd alpha, const Matrix& X, const SparseMatrix& B, Matrix& Y,
                bool accumulate, Backend backend) {
    if (resolve(backend, B.cols()) == Backend::openmp)
        detail::spmm_right_omp(alpha, X, B, Y, accumulate);
    else
        detail::spmm_right_serial(alpha, X, B, Y, accumulate);
}

void stage_combine(Matrix& out, const Matrix& y, double h,
                   std::span<const double> coeff, std::span<const Matrix* const> k,
                   Backend backend) {
    if (resolve(backend, y.cols()) == Backend::openmp)
        detail::stage_combine_omp(out, y, h, coeff, k);
    else
        detail::stage_combine_serial(out, y, h, coeff, k);
}

double wrms_norm(const Matrix& err, const Matrix& y0, const Matrix& y1,
                 double atol, double rtol, Backend backend) {
    const Eigen::Index cols = err.cols();
    std::vector<double> partials(static_cast<std::size_t>(cols), 0.0);
    if (resolve(backend, cols) == Backend::openmp)
        detail::wrms_partials_omp(err, y0, y1, atol, rtol, partials.data());
    else
        detail::wrms_partials_serial(err, y0, y1, atol, rtol, partials.data());
    // Serial combination in column order keeps the result thread-count independent.
    double total = 0.0;
    for (double p : partials) total += p;
    const double n = static_cast<double>(err.size());
    return std::sqrt(total / n);
}

}  // namespace sqz::kernels
