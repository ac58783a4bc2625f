// observables.cpp

#include "sqz/observables.hpp"
#include "sqz/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace sqz::obs {

namespace {
constexpr double kDirectionEps = 1e-12;
}

SqueezingRecord squeezing(const Matrix& rho_spin, const Matrix& Jx, const Matrix& Jy,
                          const Matrix& Jz, int N) {
    if (N < 2) throw InvalidArgumentError("squeezing: N must be >= 2");
    SqueezingRecord rec;
    const Matrix* J[3] = {&Jx, &Jy, &Jz};
    Eigen::Vector3d mean;
    for (int a = 0; a < 3; ++a) mean(a) = opalg::expect(*J[a], rho_spin).real();
    rec.J_mean = {mean(0), mean(1), mean(2)};
    rec.n_a_mean = mean(2) + 0.5 * N;

    Eigen::Matrix3d cov;
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
            const cd sym = 0.5 * (opalg::expect(Matrix((*J[a]) * (*J[b])), rho_spin) +
                                  opalg::expect(Matrix((*J[b]) * (*J[a])), rho_spin));
            cov(a, b) = sym.real() - mean(a) * mean(b);
            cov(b, a) = cov(a, b);
        }

    const double jlen = mean.norm();
    double var_min = 0.0;
    if (jlen < kDirectionEps) {
        rec.direction_defined = false;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov, Eigen::EigenvaluesOnly);
        var_min = es.eigenvalues().minCoeff();
    } else {
        const Eigen::Vector3d n0 = mean / jlen;
        // transverse frame: pick the axis least aligned with n0
        int least = 0;
        for (int a = 1; a < 3; ++a)
            if (std::abs(n0(a)) < std::abs(n0(least))) least = a;
        Eigen::Vector3d n1 = Eigen::Vector3d::Unit(least) - n0(least) * n0;
        n1.normalize();
        const Eigen::Vector3d n2 = n0.cross(n1);
        const double c11 = n1.dot(cov * n1);
        const double c22 = n2.dot(cov * n2);
        const double c12 = n1.dot(cov * n2);
        var_min = 0.5 * (c11 + c22 - std::sqrt((c11 - c22) * (c11 - c22) + 4.0 * c12 * c12));
    }
    rec.xi_s_sq = 4.0 * var_min / N;

    // Literal formula: 1 + 2<n_a> - 2<n_a^2>/N - 2|<Jbar_x^2>|, with n_a = J_z + N/2.
    const Matrix na = Jz + 0.5 * N * Matrix::Identity(Jz.rows(), Jz.cols());
    const double na2 = opalg::expect(Matrix(na * na), rho_spin).real();
    const double jbarx2 = cov(0, 0) + mean(0) * mean(0);  // <Jx^2>
    rec.xi_s_sq_paper = 1.0 + 2.0 * rec.n_a_mean - 2.0 * na2 / N - 2.0 * std::abs(jbarx2 / N);

    if (rec.direction_defined) {
        const double w = N / (2.0 * jlen);
        rec.xi_R_sq = w * w * rec.xi_s_sq;
        rec.xi_R_dB = to_dB(rec.xi_R_sq);
    } else {
        rec.xi_R_sq = std::numeric_limits<double>::quiet_NaN();
        rec.xi_R_dB = std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
}

SqueezingRecord squeezing_record(const opalg::QState& state, const opalg::OperatorSet& ops) {
    const Matrix rho_spin = state.ptrace_phonon();
    return squeezing(rho_spin, ops.spin.J_x, ops.spin.J_y, ops.spin.J_z, ops.spec.N);
}

std::pair<double, double> squeezing_kitagawa(const opalg::QState& state,
                                             const opalg::OperatorSet& ops, int N) {
    if (N != ops.spec.N) throw InvalidArgumentError("squeezing_kitagawa: N mismatch");
    const SqueezingRecord rec = squeezing_record(state, ops);
    return {rec.xi_s_sq, rec.xi_s_sq_paper};
}

double squeezing_wineland(const opalg::QState& state, const opalg::OperatorSet& ops, int N) {
    if (N != ops.spec.N) throw InvalidArgumentError("squeezing_wineland: N mismatch");
    const SqueezingRecord rec = squeezing_record(state, ops);
    if (!rec.direction_defined)
        throw InvalidArgumentError("squeezing_wineland: mean spin direction undefined");
    return rec.xi_R_sq;
}

FidelityRecord ghz_record(double p0, double pN, cd coherence_0N) {
    FidelityRecord rec;
    rec.p0 = p0;
    rec.pN = pN;
    rec.F = 0.5 * (p0 + pN) + std::abs(coherence_0N);
    double phi = -std::arg(coherence_0N);
    if (phi < 0.0) phi += constants::two_pi;
    rec.optimal_phase = std::abs(coherence_0N) > 0.0 ? phi : 0.0;
    return rec;
}

FidelityRecord ghz_fidelity_spin(const Matrix& rho_spin, int N) {
    if (N % 2 != 0)
        throw InvalidArgumentError("ghz_fidelity: protocol generates the cat state only for even N");
    if (rho_spin.rows() != N + 1)
        throw InvalidArgumentError("ghz_fidelity: spin state dimension must be N+1");
    return ghz_record(rho_spin(0, 0).real(), rho_spin(N, N).real(), rho_spin(0, N));
}

FidelityRecord ghz_fidelity(const opalg::QState& state, const opalg::HilbertSpec& spec) {
    if (state.spec.dim() != spec.dim())
        throw InvalidArgumentError("ghz_fidelity: HilbertSpec mismatch");
    return ghz_fidelity_spin(state.ptrace_phonon(), spec.N);
}

double optimal_theta_formula(int N) {
    if (N < 2) throw InvalidArgumentError("optimal_theta_formula: N must be >= 2");
    return std::pow(6.0, -1.0 / 6.0) * std::pow(0.5 * N, -2.0 / 3.0);
}

double to_dB(double xi_sq) {
    if (xi_sq <= 0.0) throw InvalidArgumentError("to_dB: argument must be > 0");
    return -10.0 * std::log10(xi_sq);
}

}  // namespace sqz::obs
