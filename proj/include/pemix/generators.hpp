#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pemix/time_series.hpp"

namespace pemix {

/// Lorenz system x' = a(y - x), y' = x(r - z) - y, z' = xy - bz.
struct LorenzParams {
    double a = 16.0;
    double b = 4.0;
    double r = 45.0;
    std::array<double, 3> initial{-13.0, -12.0, 52.0};
    double h = 0.005;
    std::size_t steps = 500'000;
    std::size_t skip = 0;  ///< leading output samples to drop

    void validate() const;
};

/// Mackey-Glass delay equation x' = beta x(t-t0) / (1 + x(t-t0)^q) - gamma x.
struct MackeyGlassParams {
    double beta = 0.2;
    double gamma = 0.1;
    double q = 10.0;
    double t0 = 17.0;
    double x0 = 1.2;
    double h = 0.1;
    std::size_t steps = 1'500'000;
    std::size_t skip = 0;

    void validate() const;
    /// t0 / h as an integer; validate() guarantees it is exact.
    [[nodiscard]] std::size_t delay_steps() const;
};

using LorenzState = std::array<double, 3>;

LorenzState lorenz_derivative(const LorenzParams& params, const LorenzState& s) noexcept;

/// One classical RK4 step of size h.
LorenzState lorenz_rk4_step(const LorenzParams& params, const LorenzState& s, double h) noexcept;

/// States after each of params.steps RK4 steps, minus the first params.skip.
std::vector<LorenzState> lorenz_trajectory(const LorenzParams& params);

/// x coordinate of lorenz_trajectory(), spacing h.
TimeSeries lorenz_series(const LorenzParams& params);

TimeSeries mackey_glass_series(const MackeyGlassParams& params);

TimeSeries sine_series(double amplitude, std::size_t period_samples, std::size_t n);

}  // namespace pemix
