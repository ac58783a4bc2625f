// dynamics.hpp — Model Hamiltonians, the closed-form geometric-phase propagator,
// and master-equation integrators with a thermal phonon bath.
//
// All rates and times are dimensionless with the mechanical frequency set to 1,
// so one mechanical period is 2*pi.

#pragma once

#include <vector>

#include "sqz/ode.hpp"
#include "sqz/opalg.hpp"
#include "sqz/types.hpp"

namespace sqz::dynamics {

// How the untruncatable physical bath (occupation n_th, damping 1/Q_m) is
// emulated by a small-occupation pair of dissipators with stationary
// occupation n_th_sim:
//   up_rate   — preserves the heating rate exactly: n_th_sim*gamma_sim = n_th*gamma_m.
//   diffusion — preserves the symmetric combination gamma*(2n+1), which is the
//               rate that governs branch dephasing for n_th >> 1.
// Both keep thermal(n_th_sim) an exact stationary state of the pair.
enum class RateCalibration { up_rate, diffusion };

struct ModelParams {
    int N = 10;
    double g_over_wm = 0.01;   // g_x / omega_m
    double w0_over_wm = 0.0;   // omega_0 / omega_m; protocol operating point is 0
    double n_th = 0.0;         // bath occupation n_bar
    double Q_m = 1e6;          // mechanical quality factor; gamma_m = 1/Q_m
    int m_periods = 1;         // protocol length in mechanical periods
    int phonon_dim = 0;        // 0 = choose automatically
    double n_th_sim = 2.0;     // emulation occupation (see RateCalibration)
    RateCalibration calibration = RateCalibration::diffusion;

    double lambda() const;             // 2 sqrt(N) g
    double gamma_m() const { return 1.0 / Q_m; }
    double noise() const { return n_th / Q_m; }  // n_bar / Q_m
    double t_m() const { return constants::two_pi * m_periods; }

    void validate() const;
};

// Emulated dissipator rates (down on b, up on b_dag).
struct NoiseRates {
    double down = 0.0;
    double up = 0.0;
};
NoiseRates noise_rates(const ModelParams& p);

// Truncation start heuristic: thermal support plus the spin-conditioned
// coherent excursion (branch displacement capped at the ~4-sigma branch).
int default_phonon_dim(const ModelParams& p);
int resolve_phonon_dim(const ModelParams& p);

// g that realizes a target geometric phase at t_m = 2*pi*m: theta(t_m) = 2*pi*m*(2g)^2.
double g_for_theta(double theta, int m_periods);

// H_HP = w0 n_a + lambda (b + b_dag) Jbar_x + n_b
SparseMatrix build_H_HP(const ModelParams& p, const opalg::OperatorSet& ops);
// Linearized comparison Hamiltonian: Jbar_x replaced by (a + a_dag)/2.
SparseMatrix build_H_dicke(const ModelParams& p, const opalg::OperatorSet& ops);

// theta(t) = (2g)^2 (t - sin t),  alpha(t) = 1 - e^{it}   (delta = omega_m = 1)
double theta_of_t(double g_over_wm, double t);
cd alpha_of_t(double t);

// Exact interaction-picture propagator at the level crossing (w0 = 0):
//   U(t) = exp(i N theta(t) Jbar_x^2) exp(lambda [alpha(t) b_dag - alpha*(t) b] Jbar_x).
// At t = 2*pi*m it coincides with the lab-frame propagator and the second
// factor is the identity. Throws RegimeError when w0 != 0.
Matrix magnus_propagator(const ModelParams& p, const opalg::OperatorSet& ops, double t);

// Spin-sector state exp(i theta J_x^2)|0> — the closed-system protocol output.
Vector twisted_vacuum(const opalg::SpinOps& spin, double theta);

// Polarized spins (bosonized vacuum) ⊗ thermal phonon state at n_th_sim.
opalg::QState initial_state(const ModelParams& p, const opalg::HilbertSpec& spec);

struct Checkpoint {
    double t = 0.0;
    opalg::QState state;
};

struct EvolutionResult {
    std::vector<Checkpoint> checkpoints;
    double trace_drift_per_period = 0.0;  // max |tr-1| per elapsed period
    double min_eig = 0.0;                 // most negative eigenvalue seen at checkpoints
    long steps_accepted = 0;
    long steps_rejected = 0;
};

struct EvolveOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    // Positivity monitor: abort when an eigenvalue drops below this.
    double positivity_abort = -1e-6;
};

// Lab-frame integration of
//   d rho/dt = -i[H_HP, rho] + L{down, b} + L{up, b_dag}
// on the full product space, vectorized density matrix, adaptive RK5(4),
// time-independent right-hand side applied as sparse left/right products.
// Trace is never renormalized; drift is reported as a diagnostic.
EvolutionResult evolve_lindblad(const opalg::QState& state, const ModelParams& p,
                                const opalg::OperatorSet& ops, double t_final,
                                const std::vector<double>& checkpoint_times,
                                const EvolveOptions& opts = {});

// Equivalent integration in the Jbar_x eigenbasis at the crossing (w0 = 0):
// the generator block-diagonalizes over spin-branch pairs, each block a small
// phonon-space ODE integrated in the frame rotating with n_b. Exact algebraic
// restructuring of the same master equation; no period maps are cached.
// Requires w0 = 0 (throws RegimeError otherwise).
EvolutionResult evolve_qnd_blocks(const opalg::QState& state, const ModelParams& p,
                                  const opalg::OperatorSet& ops, double t_final,
                                  const std::vector<double>& checkpoint_times,
                                  const EvolveOptions& opts = {});

// Closed-system pure-state propagation d psi/dt = -i H psi (diagnostics).
Vector evolve_schrodinger(const Vector& psi0, const SparseMatrix& H, double t_final,
                          const EvolveOptions& opts = {});

// Conjugate a product-space density matrix by (V (x) I): forward maps the
// Fock spin basis into the Jbar_x eigenbasis.
Matrix spin_basis_conjugate(const Matrix& rho, const Matrix& V, int S, int P, bool forward);

}  // namespace sqz::dynamics
