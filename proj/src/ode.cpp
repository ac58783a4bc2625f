// ode.cpp — Dormand-Prince 5(4) with FSAL and step-size control.

#include "sqz/ode.hpp"
#include "sqz/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace sqz::ode {

namespace {

// Dormand & Prince (1980) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

constexpr std::array<double, 1> a2{1.0 / 5};
constexpr std::array<double, 2> a3{3.0 / 40, 9.0 / 40};
constexpr std::array<double, 3> a4{44.0 / 45, -56.0 / 15, 32.0 / 9};
constexpr std::array<double, 4> a5{19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
constexpr std::array<double, 5> a6{9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656};
constexpr std::array<double, 6> b5{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84};
constexpr std::array<double, 7> b4{5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                                   -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
constexpr std::array<double, 7> err_w{b5[0] - b4[0], b5[1] - b4[1], b5[2] - b4[2], b5[3] - b4[3],
                                      b5[4] - b4[4], b5[5] - b4[5], -b4[6]};

constexpr double kMinScale = 0.2;
constexpr double kMaxScale = 5.0;

}  // namespace

Dopri5::Dopri5(Rhs rhs, Matrix y0, double t0, Options opts)
    : rhs_(std::move(rhs)), y_(std::move(y0)), t_(t0), opts_(opts) {
    for (auto& k : k_) k.resize(y_.rows(), y_.cols());
    ytmp_.resize(y_.rows(), y_.cols());
    ynew_.resize(y_.rows(), y_.cols());
    yerr_.resize(y_.rows(), y_.cols());
    yzero_ = Matrix::Zero(y_.rows(), y_.cols());
}

void Dopri5::eval(double t, const Matrix& y, Matrix& dydt) { rhs_(t, y, dydt); }

double Dopri5::initial_step(double t_span) {
    if (opts_.h_init > 0.0) return std::min(opts_.h_init, t_span);
    // Hairer/Norsett/Wanner starting-step heuristic.
    if (!have_k1_) {
        eval(t_, y_, k_[0]);
        have_k1_ = true;
    }
    const double d0 = kernels::wrms_norm(y_, y_, y_, opts_.atol, opts_.rtol, opts_.backend);
    const double d1 = kernels::wrms_norm(k_[0], y_, y_, opts_.atol, opts_.rtol, opts_.backend);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t_span);
    ytmp_ = y_ + h0 * k_[0];
    eval(t_ + h0, ytmp_, k_[1]);
    yerr_ = k_[1] - k_[0];
    const double d2 = kernels::wrms_norm(yerr_, y_, y_, opts_.atol, opts_.rtol, opts_.backend) / h0;
    double h1;
    const double dm = std::max(d1, d2);
    if (dm <= 1e-15)
        h1 = std::max(1e-6, h0 * 1e-3);
    else
        h1 = std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, t_span, opts_.h_max});
}

void Dopri5::advance_to(double t_target) {
    if (t_target < t_) throw InvalidArgumentError("Dopri5: cannot integrate backwards");
    if (t_target == t_) return;
    if (h_ <= 0.0) h_ = initial_step(t_target - t_);
    if (!have_k1_) {
        eval(t_, y_, k_[0]);
        have_k1_ = true;
    }

    const std::array<const Matrix*, 7> kp{&k_[0], &k_[1], &k_[2], &k_[3], &k_[4], &k_[5], &k_[6]};

    while (t_ < t_target) {
        double h = std::min({h_, opts_.h_max, t_target - t_});
        // Avoid a sliver step at the end.
        if (t_target - t_ - h < 1e-12 * std::max(1.0, std::abs(t_target))) h = t_target - t_;
        if (h < 1e-14 * std::max(1.0, std::abs(t_)))
            throw NumericError("Dopri5: step size underflow at t=" + std::to_string(t_));

        kernels::stage_combine(ytmp_, y_, h, a2, {kp.data(), 1}, opts_.backend);
        eval(t_ + c2 * h, ytmp_, k_[1]);
        kernels::stage_combine(ytmp_, y_, h, a3, {kp.data(), 2}, opts_.backend);
        eval(t_ + c3 * h, ytmp_, k_[2]);
        kernels::stage_combine(ytmp_, y_, h, a4, {kp.data(), 3}, opts_.backend);
        eval(t_ + c4 * h, ytmp_, k_[3]);
        kernels::stage_combine(ytmp_, y_, h, a5, {kp.data(), 4}, opts_.backend);
        eval(t_ + c5 * h, ytmp_, k_[4]);
        kernels::stage_combine(ytmp_, y_, h, a6, {kp.data(), 5}, opts_.backend);
        eval(t_ + h, ytmp_, k_[5]);
        kernels::stage_combine(ynew_, y_, h, b5, {kp.data(), 6}, opts_.backend);
        eval(t_ + h, ynew_, k_[6]);  // FSAL stage
        kernels::stage_combine(yerr_, yzero_, h, err_w, {kp.data(), 7}, opts_.backend);

        const double err = kernels::wrms_norm(yerr_, y_, ynew_, opts_.atol, opts_.rtol, opts_.backend);
        if (err <= 1.0) {
            t_ += h;
            y_.swap(ynew_);
            k_[0].swap(k_[6]);  // FSAL
            ++stats_.accepted;
            stats_.last_h = h;
            const double scale =
                err <= 1e-30 ? kMaxScale
                             : std::clamp(opts_.safety * std::pow(err, -0.2), kMinScale, kMaxScale);
            h_ = h * scale;
        } else {
            ++stats_.rejected;
            const double scale = std::clamp(opts_.safety * std::pow(err, -0.2), kMinScale, 1.0);
            h_ = h * scale;
        }
        if (stats_.accepted + stats_.rejected > opts_.max_steps)
            throw NumericError("Dopri5: exceeded max step count");
    }
}

}  // namespace sqz::ode
