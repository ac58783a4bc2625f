// opalg.cpp

#include "sqz/opalg.hpp"
#include "sqz/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

namespace sqz::opalg {

HilbertSpec::HilbertSpec(int N_, int phonon_dim_) : N(N_), spin_dim(N_ + 1), phonon_dim(phonon_dim_) {
    if (N < 2) throw InvalidArgumentError("HilbertSpec: N must be >= 2");
    if (phonon_dim < 2) throw InvalidArgumentError("HilbertSpec: phonon_dim must be >= 2");
}

BosonOps build_boson_ops(int dim) {
    if (dim < 2) throw InvalidArgumentError("build_boson_ops: dim must be >= 2");
    BosonOps ops;
    ops.a.resize(dim, dim);
    ops.a_dag.resize(dim, dim);
    ops.n.resize(dim, dim);
    std::vector<Eigen::Triplet<cd>> ta, tad, tn;
    for (int n = 1; n < dim; ++n) {
        const double r = std::sqrt(static_cast<double>(n));
        ta.emplace_back(n - 1, n, cd{r, 0.0});
        tad.emplace_back(n, n - 1, cd{r, 0.0});
    }
    for (int n = 0; n < dim; ++n) tn.emplace_back(n, n, cd{static_cast<double>(n), 0.0});
    ops.a.setFromTriplets(ta.begin(), ta.end());
    ops.a_dag.setFromTriplets(tad.begin(), tad.end());
    ops.n.setFromTriplets(tn.begin(), tn.end());
    return ops;
}

SpinOps build_hp_spin_ops(int N) {
    if (N < 2) throw InvalidArgumentError("build_hp_spin_ops: N must be >= 2");
    const int dim = N + 1;
    SpinOps ops;
    ops.J_plus = Matrix::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) {
        // <n+1| a_dag sqrt(N - n_a) |n> = sqrt(n+1) * sqrt(N - n); the argument
        // is clamped at zero so the top rung annihilates exactly.
        const double arg = static_cast<double>(N - n);
        const double f = arg > 0.0 ? std::sqrt(arg) : 0.0;
        ops.J_plus(n + 1, n) = std::sqrt(static_cast<double>(n + 1)) * f;
    }
    ops.J_minus = ops.J_plus.adjoint();
    ops.J_x = 0.5 * (ops.J_plus + ops.J_minus);
    ops.J_y = (ops.J_plus - ops.J_minus) / (2.0 * I_UNIT);
    ops.J_z = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) ops.J_z(n, n) = static_cast<double>(n) - 0.5 * N;
    ops.Jbar_x = ops.J_x / std::sqrt(static_cast<double>(N));

    Eigen::SelfAdjointEigenSolver<Matrix> es(ops.Jbar_x);
    if (es.info() != Eigen::Success) throw NumericError("build_hp_spin_ops: Jbar_x eigensolve failed");
    ops.jbar_x_eigs = es.eigenvalues();
    ops.jbar_x_vecs = es.eigenvectors();
    return ops;
}

SparseMatrix kron_sparse(const SparseMatrix& A, const SparseMatrix& B) {
    SparseMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
    std::vector<Eigen::Triplet<cd>> trip;
    trip.reserve(static_cast<std::size_t>(A.nonZeros()) * static_cast<std::size_t>(B.nonZeros()));
    for (int ka = 0; ka < A.outerSize(); ++ka) {
        for (SparseMatrix::InnerIterator ia(A, ka); ia; ++ia) {
            for (int kb = 0; kb < B.outerSize(); ++kb) {
                for (SparseMatrix::InnerIterator ib(B, kb); ib; ++ib) {
                    trip.emplace_back(ia.row() * B.rows() + ib.row(),
                                      ia.col() * B.cols() + ib.col(),
                                      ia.value() * ib.value());
                }
            }
        }
    }
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SparseMatrix sparse_from_dense(const Matrix& A, double drop_tol) {
    SparseMatrix out(A.rows(), A.cols());
    std::vector<Eigen::Triplet<cd>> trip;
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            if (std::abs(A(i, j)) > drop_tol) trip.emplace_back(i, j, A(i, j));
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SparseMatrix lift(const SparseMatrix& op, Factor which, const HilbertSpec& spec) {
    SparseMatrix eye;
    if (which == Factor::spin) {
        if (op.rows() != spec.spin_dim || op.cols() != spec.spin_dim)
            throw InvalidArgumentError("lift: operator does not match spin factor dimension");
        eye.resize(spec.phonon_dim, spec.phonon_dim);
        eye.setIdentity();
        return kron_sparse(op, eye);
    }
    if (op.rows() != spec.phonon_dim || op.cols() != spec.phonon_dim)
        throw InvalidArgumentError("lift: operator does not match phonon factor dimension");
    eye.resize(spec.spin_dim, spec.spin_dim);
    eye.setIdentity();
    return kron_sparse(eye, op);
}

OperatorSet build_operator_set(const HilbertSpec& spec) {
    OperatorSet ops;
    ops.spec = spec;
    ops.spin = build_hp_spin_ops(spec.N);
    ops.phonon = build_boson_ops(spec.phonon_dim);

    const BosonOps spin_boson = build_boson_ops(spec.spin_dim);
    ops.a = lift(spin_boson.a, Factor::spin, spec);
    ops.a_dag = lift(spin_boson.a_dag, Factor::spin, spec);
    ops.n_a = lift(spin_boson.n, Factor::spin, spec);
    ops.b = lift(ops.phonon.a, Factor::phonon, spec);
    ops.b_dag = lift(ops.phonon.a_dag, Factor::phonon, spec);
    ops.n_b = lift(ops.phonon.n, Factor::phonon, spec);

    ops.Jbar_x = lift(sparse_from_dense(ops.spin.Jbar_x), Factor::spin, spec);
    ops.J_x = lift(sparse_from_dense(ops.spin.J_x), Factor::spin, spec);
    ops.J_y = lift(sparse_from_dense(ops.spin.J_y), Factor::spin, spec);
    ops.J_z = lift(sparse_from_dense(ops.spin.J_z), Factor::spin, spec);
    ops.J_plus = lift(sparse_from_dense(ops.spin.J_plus), Factor::spin, spec);
    ops.J_minus = lift(sparse_from_dense(ops.spin.J_minus), Factor::spin, spec);
    return ops;
}

int thermal_min_dim(double n_th, double tail_bound) {
    if (n_th <= 0.0) return 2;
    const double q = n_th / (1.0 + n_th);
    // tail mass beyond dim levels is q^dim
    return std::max(2, static_cast<int>(std::ceil(std::log(tail_bound) / std::log(q))) + 1);
}

ThermalState thermal_state(double n_th, int dim) {
    if (n_th < 0.0) throw InvalidArgumentError("thermal_state: n_th must be >= 0");
    if (dim < 1) throw InvalidArgumentError("thermal_state: dim must be >= 1");
    ThermalState st;
    st.rho = Matrix::Zero(dim, dim);
    if (n_th == 0.0) {
        st.rho(0, 0) = 1.0;
        st.tail_mass = 0.0;
        st.renorm = 1.0;
        return st;
    }
    const double q = n_th / (1.0 + n_th);
    st.tail_mass = std::pow(q, dim);
    if (st.tail_mass >= 1e-6) {
        const int need = thermal_min_dim(n_th);
        throw TruncationError("thermal_state: truncated tail mass " + std::to_string(st.tail_mass) +
                                  " >= 1e-6; need dim >= " + std::to_string(need),
                              need);
    }
    st.renorm = 1.0 / (1.0 - st.tail_mass);
    double p = 1.0 / (1.0 + n_th);
    for (int n = 0; n < dim; ++n) {
        st.rho(n, n) = p * st.renorm;
        p *= q;
    }
    return st;
}

QState::QState(Matrix rho_, HilbertSpec spec_) : rho(std::move(rho_)), spec(spec_) {
    if (rho.rows() != spec.dim() || rho.cols() != spec.dim())
        throw InvalidArgumentError("QState: density matrix does not match HilbertSpec dimension");
}

double QState::trace_real() const { return rho.trace().real(); }

double QState::hermiticity_defect() const {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double QState::min_eigenvalue() const { return min_eigenvalue_hermitian(rho); }

Matrix QState::ptrace_phonon() const {
    const int S = spec.spin_dim, P = spec.phonon_dim;
    Matrix out = Matrix::Zero(S, S);
    for (int s = 0; s < S; ++s)
        for (int t = 0; t < S; ++t) {
            cd acc{0.0, 0.0};
            for (int p = 0; p < P; ++p) acc += rho(s * P + p, t * P + p);
            out(s, t) = acc;
        }
    return out;
}

Matrix QState::ptrace_spin() const {
    const int S = spec.spin_dim, P = spec.phonon_dim;
    Matrix out = Matrix::Zero(P, P);
    for (int p = 0; p < P; ++p)
        for (int q = 0; q < P; ++q) {
            cd acc{0.0, 0.0};
            for (int s = 0; s < S; ++s) acc += rho(s * P + p, s * P + q);
            out(p, q) = acc;
        }
    return out;
}

void QState::validate() const {
    const double herm = hermiticity_defect();
    if (herm > 1e-12)
        throw NumericError("QState: hermiticity defect " + std::to_string(herm) + " exceeds 1e-12");
    const double tr = trace_real();
    if (std::abs(tr - 1.0) > 1e-9)
        throw NumericError("QState: trace " + std::to_string(tr) + " deviates from 1 beyond 1e-9");
    const double me = min_eigenvalue();
    if (me < -1e-8)
        throw NumericError("QState: minimum eigenvalue " + std::to_string(me) + " below -1e-8");
}

cd expect(const SparseMatrix& op, const QState& state) {
    if (op.rows() != state.rho.rows() || op.cols() != state.rho.cols())
        throw InvalidArgumentError("expect: dimension mismatch");
    // Tr(op * rho) = sum_{ik} op(i,k) rho(k,i)
    cd acc{0.0, 0.0};
    for (int k = 0; k < op.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(op, k); it; ++it) acc += it.value() * state.rho(it.col(), it.row());
    return acc;
}

cd expect(const Matrix& op, const Matrix& rho) {
    if (op.rows() != rho.rows() || op.cols() != rho.cols())
        throw InvalidArgumentError("expect: dimension mismatch");
    return (op * rho).trace();
}

namespace {

Matrix sqrt_psd(const Matrix& H) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (H + H.adjoint()));
    if (es.info() != Eigen::Success) throw NumericError("sqrt_psd: eigensolve failed");
    Eigen::VectorXd d = es.eigenvalues();
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = d(i) > 0.0 ? std::sqrt(d(i)) : 0.0;
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const Matrix& rho, const Matrix& sigma) {
    const Matrix sr = sqrt_psd(rho);
    const Matrix m = sr * sigma * sr;
    const double t = sqrt_psd(m).trace().real();
    return t * t;
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
    Matrix d = rho - sigma;
    d = 0.5 * (d + d.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("trace_distance: eigensolve failed");
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double min_eigenvalue_hermitian(const Matrix& H) {
    const Eigen::Index n = H.rows();
    if (n <= 1500) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw NumericError("min_eigenvalue: eigensolve failed");
        return es.eigenvalues().minCoeff();
    }
    // Lanczos with full reorthogonalization; deterministic start vector.
    const int m = std::min<Eigen::Index>(60, n);
    std::vector<Vector> basis;
    basis.reserve(m);
    Vector v(n);
    // simple fixed-seed LCG fill
    std::uint64_t s = 0x9e3779b97f4a7c15ULL;
    for (Eigen::Index i = 0; i < n; ++i) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        v(i) = cd{static_cast<double>(s >> 33) / 2147483648.0 - 1.0, 0.0};
    }
    v.normalize();
    Eigen::VectorXd alpha(m), beta(m);
    alpha.setZero();
    beta.setZero();
    basis.push_back(v);
    Vector w;
    int steps = 0;
    for (int j = 0; j < m; ++j) {
        w = H * basis[static_cast<std::size_t>(j)];
        alpha(j) = std::real(basis[static_cast<std::size_t>(j)].dot(w));
        w -= alpha(j) * basis[static_cast<std::size_t>(j)];
        if (j > 0) w -= beta(j - 1) * basis[static_cast<std::size_t>(j - 1)];
        for (const auto& u : basis) w -= u.dot(w) * u;  // full reorthogonalization
        steps = j + 1;
        const double nb = w.norm();
        if (nb < 1e-14) break;
        if (j + 1 < m) {
            beta(j) = nb;
            basis.push_back(w / nb);
        }
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
    for (int j = 0; j < steps; ++j) {
        T(j, j) = alpha(j);
        if (j + 1 < steps) {
            T(j, j + 1) = beta(j);
            T(j + 1, j) = beta(j);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Matrix exp_i_hermitian(const Matrix& H) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    if (es.info() != Eigen::Success) throw NumericError("exp_i_hermitian: eigensolve failed");
    const Eigen::Index n = H.rows();
    Vector phases(n);
    for (Eigen::Index i = 0; i < n; ++i) phases(i) = std::exp(I_UNIT * es.eigenvalues()(i));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace sqz::opalg
