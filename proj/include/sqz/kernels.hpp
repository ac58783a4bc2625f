// kernels.hpp — Sparse·dense product kernels and reductions for density-matrix propagation.
//
// Two implementations of every kernel: a plain serial reference and an OpenMP
// version parallelized over output columns. Each output element is accumulated
// by exactly one thread in a fixed order, so results are bitwise identical
// across backends and thread counts.

#pragma once

#include <span>

#include "sqz/types.hpp"

namespace sqz::kernels {

enum class Backend { serial, openmp, automatic };

// Threads used by the openmp backend (0 = OpenMP default).
void set_threads(int n);
int max_threads();

// True when called from inside an OpenMP parallel region.
bool in_parallel();

// Resolve `automatic` against matrix size and nesting state.
Backend resolve(Backend b, Eigen::Index work_items);

// Y = alpha * A * X   (+ Y if accumulate)
void spmm_left(cd alpha, const SparseMatrix& A, const Matrix& X, Matrix& Y,
               bool accumulate, Backend backend = Backend::automatic);

// Y = alpha * X * B   (+ Y if accumulate)
void spmm_right(cd alpha, const Matrix& X, const SparseMatrix& B, Matrix& Y,
                bool accumulate, Backend backend = Backend::automatic);

// out = y + h * sum_i coeff[i] * k[i]
void stage_combine(Matrix& out, const Matrix& y, double h,
                   std::span<const double> coeff, std::span<const Matrix* const> k,
                   Backend backend = Backend::automatic);

// Weighted RMS norm of err against tolerances built from max(|y0|,|y1|):
//   sqrt( mean_i ( |err_i| / (atol + rtol*max(|y0_i|,|y1_i|)) )^2 )
// Deterministic regardless of thread count: per-column partial sums are
// combined serially in column order.
double wrms_norm(const Matrix& err, const Matrix& y0, const Matrix& y1,
                 double atol, double rtol, Backend backend = Backend::automatic);

namespace detail {
void spmm_left_serial(cd alpha, const SparseMatrix& A, const Matrix& X, Matrix& Y, bool accumulate);
void spmm_left_omp(cd alpha, const SparseMatrix& A, const Matrix& X, Matrix& Y, bool accumulate);
void spmm_right_serial(cd alpha, const Matrix& X, const SparseMatrix& B, Matrix& Y, bool accumulate);
void spmm_right_omp(cd alpha, const Matrix& X, const SparseMatrix& B, Matrix& Y, bool accumulate);
void stage_combine_serial(Matrix& out, const Matrix& y, double h,
                          std::span<const double> coeff, std::span<const Matrix* const> k);
void stage_combine_omp(Matrix& out, const Matrix& y, double h,
                       std::span<const double> coeff, std::span<const Matrix* const> k);
void wrms_partials_serial(const Matrix& err, const Matrix& y0, const Matrix& y1,
                          double atol, double rtol, double* partials);
void wrms_partials_omp(const Matrix& err, const Matrix& y0, const Matrix& y1,
                       double atol, double rtol, double* partials);
}  // namespace detail

}  // namespace sqz::kernels
