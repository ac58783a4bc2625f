// observables.hpp — Squeezing parameters, cat-state fidelity, and derived diagnostics.

#pragma once

#include <array>

#include "sqz/opalg.hpp"
#include "sqz/types.hpp"

namespace sqz::obs {

struct SqueezingRecord {
    double xi_s_sq = 0.0;        // minimal-transverse-variance form: 4 min Var(J.n_perp)/N
    double xi_s_sq_paper = 0.0;  // literal bosonic formula, reported for transparency
    double xi_R_sq = 0.0;
    double xi_R_dB = 0.0;
    std::array<double, 3> J_mean{0.0, 0.0, 0.0};
    double n_a_mean = 0.0;
    bool direction_defined = true;  // false when |<J>| < 1e-12 (transverse plane undefined)
};

struct FidelityRecord {
    double F = 0.0;
    double optimal_phase = 0.0;  // in [0, 2*pi)
    double p0 = 0.0;
    double pN = 0.0;
};

// Squeezing from a spin-sector density matrix and the matching collective-spin
// matrices (any faithful representation).
SqueezingRecord squeezing(const Matrix& rho_spin, const Matrix& Jx, const Matrix& Jy,
                          const Matrix& Jz, int N);

// Wrappers taking the full product-space state; the spin factor is obtained by
// partial trace over the phonon mode.
SqueezingRecord squeezing_record(const opalg::QState& state, const opalg::OperatorSet& ops);
std::pair<double, double> squeezing_kitagawa(const opalg::QState& state,
                                             const opalg::OperatorSet& ops, int N);
// Throws InvalidArgumentError when the mean spin direction is undefined.
double squeezing_wineland(const opalg::QState& state, const opalg::OperatorSet& ops, int N);

// F = max_phi <GHZ(phi)| rho |GHZ(phi)> with |GHZ(phi)> = (|0> + e^{i phi}|N>)/sqrt(2);
// the maximum is closed-form: phi* = -arg <0|rho|N>.
FidelityRecord ghz_record(double p0, double pN, cd coherence_0N);
FidelityRecord ghz_fidelity(const opalg::QState& state, const opalg::HilbertSpec& spec);
FidelityRecord ghz_fidelity_spin(const Matrix& rho_spin, int N);

double optimal_theta_formula(int N);  // 6^{-1/6} (N/2)^{-2/3}

double to_dB(double xi_sq);  // -10 log10(xi^2)

}  // namespace sqz::obs
