// dynamics.cpp — model construction, closed-form propagator, initial state.

#include "sqz/dynamics.hpp"
#include "sqz/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sqz::dynamics {

double ModelParams::lambda() const { return 2.0 * std::sqrt(static_cast<double>(N)) * g_over_wm; }

void ModelParams::validate() const {
    if (N < 2) throw InvalidArgumentError("ModelParams: N must be >= 2");
    if (g_over_wm < 0.0) throw InvalidArgumentError("ModelParams: g_over_wm must be >= 0");
    if (Q_m <= 0.0) throw InvalidArgumentError("ModelParams: Q_m must be > 0");
    if (m_periods < 1) throw InvalidArgumentError("ModelParams: m_periods must be >= 1");
    if (n_th < 0.0) throw InvalidArgumentError("ModelParams: n_th must be >= 0");
    if (n_th_sim < 0.0) throw InvalidArgumentError("ModelParams: n_th_sim must be >= 0");
    if (noise() > 0.0 && n_th_sim <= 0.0)
        throw InvalidArgumentError("ModelParams: n_th_sim must be > 0 when the bath is noisy");
}

NoiseRates noise_rates(const ModelParams& p) {
    const double x = p.noise();
    if (x <= 0.0) return {0.0, 0.0};
    const double ns = p.n_th_sim;
    if (p.calibration == RateCalibration::up_rate) {
        // n_th_sim * gamma_sim = n_th * gamma_m
        const double gamma_sim = x / ns;
        return {(ns + 1.0) * gamma_sim, ns * gamma_sim};
    }
    // gamma_sim * (2 n_th_sim + 1) = gamma_m * (2 n_th + 1) ~= 2x for n_th >> 1
    const double total = 2.0 * x + p.gamma_m();
    return {total * (ns + 1.0) / (2.0 * ns + 1.0), total * ns / (2.0 * ns + 1.0)};
}

int default_phonon_dim(const ModelParams& p) {
    const int tail = opalg::thermal_min_dim(p.n_th_sim);
    // Branch displacement 2*lambda*|jbar_x|; branches beyond ~4 sigma of the
    // polarized state (sigma = 1/2 in jbar_x units) carry negligible weight.
    const double mu_cap = std::min(std::sqrt(static_cast<double>(p.N)) / 2.0, 2.0);
    const double disp = 2.0 * p.lambda() * mu_cap;
    const int heur = static_cast<int>(std::ceil(4.0 * p.n_th_sim + disp * disp + 10.0));
    return std::max({2, tail, heur});
}

int resolve_phonon_dim(const ModelParams& p) {
    return p.phonon_dim > 0 ? p.phonon_dim : default_phonon_dim(p);
}

double g_for_theta(double theta, int m_periods) {
    if (theta <= 0.0) throw InvalidArgumentError("g_for_theta: theta must be > 0");
    if (m_periods < 1) throw InvalidArgumentError("g_for_theta: m_periods must be >= 1");
    return 0.5 * std::sqrt(theta / (constants::two_pi * m_periods));
}

SparseMatrix build_H_HP(const ModelParams& p, const opalg::OperatorSet& ops) {
    SparseMatrix H = ops.Jbar_x * (ops.b + ops.b_dag);
    H = p.lambda() * H + ops.n_b;
    if (p.w0_over_wm != 0.0) H = H + p.w0_over_wm * ops.n_a;
    return H;
}

SparseMatrix build_H_dicke(const ModelParams& p, const opalg::OperatorSet& ops) {
    SparseMatrix X = (ops.a + ops.a_dag) * (ops.b + ops.b_dag);
    SparseMatrix H = (0.5 * p.lambda()) * X + ops.n_b;
    if (p.w0_over_wm != 0.0) H = H + p.w0_over_wm * ops.n_a;
    return H;
}

double theta_of_t(double g_over_wm, double t) {
    const double f = 2.0 * g_over_wm;
    return f * f * (t - std::sin(t));
}

cd alpha_of_t(double t) { return cd{1.0, 0.0} - std::exp(I_UNIT * t); }

Matrix magnus_propagator(const ModelParams& p, const opalg::OperatorSet& ops, double t) {
    if (p.w0_over_wm != 0.0)
        throw RegimeError("magnus_propagator: closed form is valid only at the crossing (w0 = 0)");
    if (t < 0.0) throw InvalidArgumentError("magnus_propagator: t must be >= 0");
    const int S = ops.spec.spin_dim, P = ops.spec.phonon_dim;
    const double theta = theta_of_t(p.g_over_wm, t);
    const cd alpha = alpha_of_t(t);
    const double lam = p.lambda();

    // First factor: exp(i N theta Jbar_x^2), diagonal in the Jbar_x eigenbasis.
    const Matrix& V = ops.spin.jbar_x_vecs;
    Vector phases(S);
    for (int k = 0; k < S; ++k) {
        const double mu = ops.spin.jbar_x_eigs(k);
        phases(k) = std::exp(I_UNIT * (p.N * theta * mu * mu));
    }
    const Matrix U1_spin = V * phases.asDiagonal() * V.adjoint();

    // Second factor: exp(lambda [alpha b_dag - alpha* b] Jbar_x), an
    // anti-Hermitian exponent evaluated as a dense matrix exponential.
    Matrix M_ph = Matrix::Zero(P, P);
    for (int n = 1; n < P; ++n) {
        const double r = std::sqrt(static_cast<double>(n));
        M_ph(n, n - 1) = lam * alpha * r;         // b_dag part
        M_ph(n - 1, n) = -lam * std::conj(alpha) * r;  // -alpha* b part
    }
    Matrix K = Matrix::Zero(S * P, S * P);  // K = -i * (Jbar_x ⊗ M_ph), Hermitian
    const Matrix& Jx_spin = ops.spin.Jbar_x;
    for (int s = 0; s < S; ++s)
        for (int u = 0; u < S; ++u) {
            const cd w = -I_UNIT * Jx_spin(s, u);
            if (w == cd{0.0, 0.0}) continue;
            K.block(s * P, u * P, P, P) += w * M_ph;
        }
    const Matrix U2 = opalg::exp_i_hermitian(K);

    // U = (U1_spin ⊗ I) * U2, blockwise over spin rows.
    Matrix U = Matrix::Zero(S * P, S * P);
    for (int s = 0; s < S; ++s)
        for (int u = 0; u < S; ++u) {
            const cd w = U1_spin(s, u);
            if (std::abs(w) == 0.0) continue;
            U.block(s * P, 0, P, S * P) += w * U2.block(u * P, 0, P, S * P);
        }
    return U;
}

Vector twisted_vacuum(const opalg::SpinOps& spin, double theta) {
    const int S = static_cast<int>(spin.Jbar_x.rows());
    const int N = S - 1;
    Vector w = spin.jbar_x_vecs.adjoint().col(0);  // overlaps <mu_k|0>
    for (int k = 0; k < S; ++k) {
        const double mu = spin.jbar_x_eigs(k);
        w(k) *= std::exp(I_UNIT * (N * theta * mu * mu));
    }
    return spin.jbar_x_vecs * w;
}

opalg::QState initial_state(const ModelParams& p, const opalg::HilbertSpec& spec) {
    p.validate();
    if (spec.N != p.N) throw InvalidArgumentError("initial_state: HilbertSpec N mismatch");
    const opalg::ThermalState th = opalg::thermal_state(p.n_th_sim, spec.phonon_dim);
    Matrix rho = Matrix::Zero(spec.dim(), spec.dim());
    const int P = spec.phonon_dim;
    rho.block(0, 0, P, P) = th.rho;  // spin vacuum occupies the s = 0 block
    return opalg::QState(std::move(rho), spec);
}

Vector evolve_schrodinger(const Vector& psi0, const SparseMatrix& H, double t_final,
                          const EvolveOptions& opts) {
    ode::Options oo;
    oo.rtol = opts.rtol;
    oo.atol = opts.atol;
    Matrix y = psi0;
    auto rhs = [&H](double, const Matrix& y_, Matrix& dy) {
        kernels::spmm_left(-I_UNIT, H, y_, dy, false);
    };
    ode::Dopri5 stepper(rhs, std::move(y), 0.0, oo);
    stepper.advance_to(t_final);
    return stepper.state();
}

Matrix spin_basis_conjugate(const Matrix& rho, const Matrix& V, int S, int P, bool forward) {
    if (rho.rows() != S * P || rho.cols() != S * P)
        throw InvalidArgumentError("spin_basis_conjugate: dimension mismatch");
    Matrix out(S * P, S * P);
    Matrix slice(S, S), tmp(S, S);
    for (int p = 0; p < P; ++p) {
        for (int q = 0; q < P; ++q) {
            for (int s = 0; s < S; ++s)
                for (int u = 0; u < S; ++u) slice(s, u) = rho(s * P + p, u * P + q);
            if (forward)
                tmp = V.adjoint() * slice * V;
            else
                tmp = V * slice * V.adjoint();
            for (int s = 0; s < S; ++s)
                for (int u = 0; u < S; ++u) out(s * P + p, u * P + q) = tmp(s, u);
        }
    }
    return out;
}

}  // namespace sqz::dynamics
