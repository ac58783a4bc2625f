// ode.hpp — Embedded adaptive Runge-Kutta 5(4) (Dormand-Prince) on complex matrix states.

#pragma once

#include <functional>
#include <limits>

#include "sqz/kernels.hpp"
#include "sqz/types.hpp"

namespace sqz::ode {

struct Options {
    double rtol = 1e-8;
    double atol = 1e-10;
    double h_init = 0.0;  // 0 → automatic
    double h_max = std::numeric_limits<double>::infinity();
    double safety = 0.9;
    long max_steps = 50'000'000;
    kernels::Backend backend = kernels::Backend::automatic;
};

struct Stats {
    long accepted = 0;
    long rejected = 0;
    double last_h = 0.0;
};

// rhs(t, y, dydt): fill dydt; must not resize y.
using Rhs = std::function<void(double, const Matrix&, Matrix&)>;

class Dopri5 {
public:
    Dopri5(Rhs rhs, Matrix y0, double t0, Options opts);

    // Integrate forward until time() == t exactly (checkpoint clipping).
    void advance_to(double t);

    const Matrix& state() const { return y_; }
    double time() const { return t_; }
    const Stats& stats() const { return stats_; }

private:
    double initial_step(double t_span);
    void eval(double t, const Matrix& y, Matrix& dydt);

    Rhs rhs_;
    Matrix y_;
    double t_;
    Options opts_;
    Stats stats_;
    double h_ = 0.0;
    bool have_k1_ = false;  // FSAL cache validity
    Matrix k_[7];
    Matrix ytmp_, ynew_, yerr_, yzero_;
};

}  // namespace sqz::ode
