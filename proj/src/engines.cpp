// engines.cpp — master-equation integrators: full-space lab-frame propagation and
// the branch-blocked rotating-frame propagation used at the level crossing.

#include "sqz/dynamics.hpp"
#include "sqz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sqz::dynamics {

namespace {

std::vector<double> normalize_checkpoints(double t_final, const std::vector<double>& requested) {
    if (t_final < 0.0) throw InvalidArgumentError("evolve: t_final must be >= 0");
    std::vector<double> cps = requested;
    for (double t : cps)
        if (t < 0.0 || t > t_final + 1e-12)
            throw InvalidArgumentError("evolve: checkpoint outside [0, t_final]");
    cps.push_back(t_final);
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    return cps;
}

void record_checkpoint(EvolutionResult& result, double t, opalg::QState state,
                       double positivity_abort) {
    const double tr = state.trace_real();
    const double periods = std::max(1.0, t / constants::two_pi);
    result.trace_drift_per_period = std::max(result.trace_drift_per_period, std::abs(tr - 1.0) / periods);
    const double me = state.min_eigenvalue();
    result.min_eig = std::min(result.min_eig, me);
    if (me < positivity_abort)
        throw NumericError("evolve: positivity violated at t=" + std::to_string(t) +
                           " (min eigenvalue " + std::to_string(me) + ")");
    result.checkpoints.push_back({t, std::move(state)});
}

}  // namespace

EvolutionResult evolve_lindblad(const opalg::QState& state, const ModelParams& p,
                                const opalg::OperatorSet& ops, double t_final,
                                const std::vector<double>& checkpoint_times,
                                const EvolveOptions& opts) {
    p.validate();
    if (state.spec.dim() != ops.spec.dim())
        throw InvalidArgumentError("evolve_lindblad: state does not match operator set");
    const auto cps = normalize_checkpoints(t_final, checkpoint_times);
    const NoiseRates rates = noise_rates(p);

    const SparseMatrix H = build_H_HP(p, ops);
    SparseMatrix C = (-I_UNIT) * H;
    if (rates.down > 0.0) C = C - cd{0.5 * rates.down, 0.0} * (ops.b_dag * ops.b);
    if (rates.up > 0.0) C = C - cd{0.5 * rates.up, 0.0} * (ops.b * ops.b_dag);
    const SparseMatrix C_dag = SparseMatrix(C.adjoint());

    Matrix T(state.rho.rows(), state.rho.cols());
    auto rhs = [&](double, const Matrix& X, Matrix& Y) {
        kernels::spmm_left(cd{1.0, 0.0}, C, X, Y, false);
        kernels::spmm_right(cd{1.0, 0.0}, X, C_dag, Y, true);
        if (rates.down > 0.0) {
            kernels::spmm_left(cd{1.0, 0.0}, ops.b, X, T, false);
            kernels::spmm_right(cd{rates.down, 0.0}, T, ops.b_dag, Y, true);
        }
        if (rates.up > 0.0) {
            kernels::spmm_left(cd{1.0, 0.0}, ops.b_dag, X, T, false);
            kernels::spmm_right(cd{rates.up, 0.0}, T, ops.b, Y, true);
        }
    };

    ode::Options oo;
    oo.rtol = opts.rtol;
    oo.atol = opts.atol;
    ode::Dopri5 stepper(rhs, state.rho, 0.0, oo);

    EvolutionResult result;
    for (double tc : cps) {
        stepper.advance_to(tc);
        record_checkpoint(result, tc, opalg::QState(stepper.state(), state.spec), opts.positivity_abort);
    }
    result.steps_accepted = stepper.stats().accepted;
    result.steps_rejected = stepper.stats().rejected;
    return result;
}

namespace {

// Right-hand side of one spin-branch block in the frame rotating with n_b:
//   dX = -i( lmk W(t) X - lml X W(t) ) + gd (b X b^ - {n,X}/2) + gu (b^ X b - {b b^,X}/2)
// with W(t) = b^ e^{it} + b e^{-it} and lmk = lambda*mu_k, lml = lambda*mu_l.
// Written as a single 7-point stencil pass.
void qnd_block_rhs(double t, const Matrix& X, Matrix& dX, double lmk, double lml, double gd,
                   double gu, const double* sq) {
    const int P = static_cast<int>(X.rows());
    const cd ep = std::exp(I_UNIT * t);
    const cd em = std::conj(ep);
    const cd wk_up = -I_UNIT * lmk * ep;   // multiplies sqrt(i)   X(i-1,j)
    const cd wk_dn = -I_UNIT * lmk * em;   // multiplies sqrt(i+1) X(i+1,j)
    const cd wl_up = I_UNIT * lml * ep;    // multiplies sqrt(j+1) X(i,j+1)
    const cd wl_dn = I_UNIT * lml * em;    // multiplies sqrt(j)   X(i,j-1)
    const bool dissip = gd != 0.0 || gu != 0.0;
    for (int j = 0; j < P; ++j) {
        const cd* xj = X.data() + static_cast<std::ptrdiff_t>(j) * P;
        const cd* xjm = j > 0 ? xj - P : nullptr;
        const cd* xjp = j + 1 < P ? xj + P : nullptr;
        cd* out = dX.data() + static_cast<std::ptrdiff_t>(j) * P;
        for (int i = 0; i < P; ++i) {
            cd acc{0.0, 0.0};
            if (i > 0) acc += wk_up * sq[i] * xj[i - 1];
            if (i + 1 < P) acc += wk_dn * sq[i + 1] * xj[i + 1];
            if (xjp) acc += wl_up * sq[j + 1] * xjp[i];
            if (xjm) acc += wl_dn * sq[j] * xjm[i];
            if (dissip) {
                if (gd != 0.0) {
                    if (i + 1 < P && xjp) acc += gd * (sq[i + 1] * sq[j + 1]) * xjp[i + 1];
                    acc -= gd * 0.5 * static_cast<double>(i + j) * xj[i];
                }
                if (gu != 0.0) {
                    if (i > 0 && xjm) acc += gu * (sq[i] * sq[j]) * xjm[i - 1];
                    const double ndi = i + 1 < P ? static_cast<double>(i + 1) : 0.0;
                    const double ndj = j + 1 < P ? static_cast<double>(j + 1) : 0.0;
                    acc -= gu * 0.5 * (ndi + ndj) * xj[i];
                }
            }
            out[i] = acc;
        }
    }
}

}  // namespace

EvolutionResult evolve_qnd_blocks(const opalg::QState& state, const ModelParams& p,
                                  const opalg::OperatorSet& ops, double t_final,
                                  const std::vector<double>& checkpoint_times,
                                  const EvolveOptions& opts) {
    p.validate();
    if (p.w0_over_wm != 0.0)
        throw RegimeError("evolve_qnd_blocks: branch decomposition requires w0 = 0");
    if (state.spec.dim() != ops.spec.dim())
        throw InvalidArgumentError("evolve_qnd_blocks: state does not match operator set");
    const auto cps = normalize_checkpoints(t_final, checkpoint_times);
    const NoiseRates rates = noise_rates(p);
    const int S = state.spec.spin_dim;
    const int P = state.spec.phonon_dim;
    const double lam = p.lambda();

    const Matrix& V = ops.spin.jbar_x_vecs;
    const Matrix rho_mu = spin_basis_conjugate(state.rho, V, S, P, true);

    std::vector<double> sq(static_cast<std::size_t>(P) + 1);
    for (int n = 0; n <= P; ++n) sq[static_cast<std::size_t>(n)] = std::sqrt(static_cast<double>(n));

    struct Pair {
        int k, l;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(S) * (S + 1) / 2);
    for (int k = 0; k < S; ++k)
        for (int l = k; l < S; ++l) pairs.push_back({k, l});

    const std::size_t ncp = cps.size();
    std::vector<Matrix> rho_cp(ncp, Matrix::Zero(S * P, S * P));
    std::vector<long> acc_steps(pairs.size(), 0), rej_steps(pairs.size(), 0);

    ode::Options oo;
    oo.rtol = opts.rtol;
    oo.atol = opts.atol;

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(pairs.size()); ++idx) {
        const auto [k, l] = pairs[static_cast<std::size_t>(idx)];
        const double lmk = lam * ops.spin.jbar_x_eigs(k);
        const double lml = lam * ops.spin.jbar_x_eigs(l);
        Matrix X = rho_mu.block(k * P, l * P, P, P);
        auto rhs = [&](double t, const Matrix& Y, Matrix& dY) {
            qnd_block_rhs(t, Y, dY, lmk, lml, rates.down, rates.up, sq.data());
        };
        ode::Dopri5 stepper(rhs, std::move(X), 0.0, oo);
        for (std::size_t c = 0; c < ncp; ++c) {
            stepper.advance_to(cps[c]);
            // Undo the rotating frame: lab X = e^{-i n t} X~ e^{+i n t}.
            const double t = cps[c];
            Matrix lab = stepper.state();
            for (int j = 0; j < P; ++j)
                for (int i = 0; i < P; ++i) lab(i, j) *= std::exp(-I_UNIT * (static_cast<double>(i - j) * t));
            rho_cp[c].block(k * P, l * P, P, P) = lab;
            if (l != k) rho_cp[c].block(l * P, k * P, P, P) = lab.adjoint();
        }
        acc_steps[static_cast<std::size_t>(idx)] = stepper.stats().accepted;
        rej_steps[static_cast<std::size_t>(idx)] = stepper.stats().rejected;
    }

    EvolutionResult result;
    for (std::size_t c = 0; c < ncp; ++c) {
        Matrix rho_fock = spin_basis_conjugate(rho_cp[c], V, S, P, false);
        record_checkpoint(result, cps[c], opalg::QState(std::move(rho_fock), state.spec),
                          opts.positivity_abort);
        rho_cp[c].resize(0, 0);
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        result.steps_accepted += acc_steps[i];
        result.steps_rejected += rej_steps[i];
    }
    return result;
}

}  // namespace sqz::dynamics
