// opalg.hpp — Truncated Hilbert-space operator algebra: boson ladders, bosonized
// collective-spin operators, tensor lifts, thermal states, expectations.
//
// Factor ordering is fixed: spin factor first, phonon second. A product-space
// index decomposes as i = s * phonon_dim + p.

#pragma once

#include <optional>

#include "sqz/types.hpp"

namespace sqz::opalg {

struct HilbertSpec {
    int N = 0;           // number of spins, >= 2
    int spin_dim = 0;    // N + 1 exactly (occupation <= N makes the bosonized map lossless)
    int phonon_dim = 0;  // mechanical-mode truncation, >= 2

    HilbertSpec() = default;
    HilbertSpec(int N_, int phonon_dim_);

    int dim() const { return spin_dim * phonon_dim; }
    int index(int s, int p) const { return s * phonon_dim + p; }
};

struct BosonOps {
    SparseMatrix a, a_dag, n;
};

struct SpinOps {
    // Dense (N+1)-dimensional operators on the spin factor alone.
    Matrix Jbar_x, J_x, J_y, J_z, J_plus, J_minus;
    RealVector jbar_x_eigs;  // eigenvalues of Jbar_x, ascending: (k - N/2)/sqrt(N)
    Matrix jbar_x_vecs;      // corresponding eigenvectors (columns)
};

// All operators lifted to the spin (x) phonon product space, as sparse matrices.
// Immutable after construction; safe to share across threads.
struct OperatorSet {
    HilbertSpec spec;

    // Spin-factor bosonized ladder (a) and phonon ladder (b), lifted.
    SparseMatrix a, a_dag, n_a;
    SparseMatrix b, b_dag, n_b;
    SparseMatrix Jbar_x, J_x, J_y, J_z, J_plus, J_minus;

    // Factor-local copies for observable evaluation on reduced states.
    SpinOps spin;
    BosonOps phonon;
};

BosonOps build_boson_ops(int dim);

// Bosonized collective-spin operators on the (N+1)-dimensional symmetric space:
//   J_z = n - N/2,  J_+ = a_dag sqrt(N - n)  (entrywise sqrt, clamped at 0),
//   J_x = (J_+ + J_-)/2,  J_y = (J_+ - J_-)/(2i),  Jbar_x = J_x / sqrt(N).
SpinOps build_hp_spin_ops(int N);

enum class Factor { spin, phonon };

// Kronecker embedding op (x) I or I (x) op, spin factor first.
SparseMatrix lift(const SparseMatrix& op, Factor which, const HilbertSpec& spec);

OperatorSet build_operator_set(const HilbertSpec& spec);

struct ThermalState {
    Matrix rho;          // diagonal density matrix, renormalized after truncation
    double tail_mass;    // probability mass beyond the truncation before renormalization
    double renorm;       // applied renormalization factor 1/(1-tail_mass)
};

// Geometric occupation distribution p_n ∝ n_th^n/(1+n_th)^{n+1}. Throws
// TruncationError (naming the minimum admissible dim) if the truncated tail
// mass would reach 1e-6.
ThermalState thermal_state(double n_th, int dim);

int thermal_min_dim(double n_th, double tail_bound = 1e-6);

struct QState {
    Matrix rho;
    HilbertSpec spec;

    QState() = default;
    QState(Matrix rho_, HilbertSpec spec_);

    double trace_real() const;
    double hermiticity_defect() const;  // max elementwise |rho - rho^dag|
    double min_eigenvalue() const;      // dense below 1500, Lanczos estimate above

    Matrix ptrace_phonon() const;  // spin-factor reduced state, (N+1) x (N+1)
    Matrix ptrace_spin() const;    // phonon-factor reduced state

    // Throws if hermiticity (1e-12), trace (1e-9) or positivity (-1e-8) is violated.
    void validate() const;
};

cd expect(const SparseMatrix& op, const QState& state);
cd expect(const Matrix& op, const Matrix& rho);

// Uhlmann fidelity and trace distance between density matrices.
double fidelity(const Matrix& rho, const Matrix& sigma);
double trace_distance(const Matrix& rho, const Matrix& sigma);

// Smallest eigenvalue of a Hermitian matrix; Lanczos with full
// reorthogonalization for large dimensions, deterministic start vector.
double min_eigenvalue_hermitian(const Matrix& H);

SparseMatrix kron_sparse(const SparseMatrix& A, const SparseMatrix& B);
SparseMatrix sparse_from_dense(const Matrix& A, double drop_tol = 0.0);

// exp(i * H) for Hermitian H via eigendecomposition (unitary result).
Matrix exp_i_hermitian(const Matrix& H);

}  // namespace sqz::opalg
