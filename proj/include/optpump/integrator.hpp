#pragma once

#include <cmath>
#include <cstddef>

#include "optpump/errors.hpp"

namespace optpump {

// Uniform partition of [0, t_end] into steps no longer than dt_max.
struct TimeStepping {
    std::size_t steps = 0;
    double dt = 0.0;

    static TimeStepping cover(double t_end, double dt_max) {
        if (!(dt_max > 0.0) || !std::isfinite(dt_max)) throw DomainError("dt must be > 0");
        if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be > 0");
        auto n = static_cast<std::size_t>(std::ceil(t_end / dt_max * (1.0 - 1e-12)));
        if (n == 0) n = 1;
        return {n, t_end / static_cast<double>(n)};
    }

    double time(std::size_t k) const { return static_cast<double>(k) * dt; }
};

// Classical fourth-order Runge-Kutta step for dy/dt = rhs(t, y).
template <class State, class Rhs>
State rk4_step(const State& y, double t, double dt, Rhs&& rhs) {
    const double h2 = 0.5 * dt;
    const State k1 = rhs(t, y);
    const State k2 = rhs(t + h2, State(y + h2 * k1));
    const State k3 = rhs(t + h2, State(y + h2 * k2));
    const State k4 = rhs(t + dt, State(y + dt * k3));
    return State(y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

} // namespace optpump
