#include "pemix/generators.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pemix/errors.hpp"

namespace pemix {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidInput(std::string(name) + " must be positive and finite");
    }
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw InvalidInput(std::string(name) + " must be finite");
}

void require_steps(std::size_t steps, std::size_t skip) {
    if (steps < 1) throw InvalidInput("steps must be >= 1");
    if (skip >= steps) {
        throw InvalidInput("skip (" + std::to_string(skip) + ") must be smaller than steps (" +
                           std::to_string(steps) + ")");
    }
}

}  // namespace

void LorenzParams::validate() const {
    require_finite(a, "a");
    require_finite(b, "b");
    require_finite(r, "r");
    for (const double v : initial) require_finite(v, "initial state");
    require_positive(h, "step size h");
    require_steps(steps, skip);
}

void MackeyGlassParams::validate() const {
    // beta = 0 is admitted: it reduces the system to linear decay.
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidInput("beta must be >= 0 and finite");
    require_positive(gamma, "gamma");
    require_positive(q, "q");
    require_positive(t0, "delay t0");
    require_finite(x0, "x0");
    require_positive(h, "step size h");
    require_steps(steps, skip);
    const double ratio = t0 / h;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        throw InvalidInput("delay t0 must be a positive integer multiple of the step size h");
    }
}

std::size_t MackeyGlassParams::delay_steps() const {
    return static_cast<std::size_t>(std::round(t0 / h));
}

LorenzState lorenz_derivative(const LorenzParams& p, const LorenzState& s) noexcept {
    const auto [x, y, z] = s;
    return {p.a * (y - x), x * (p.r - z) - y, x * y - p.b * z};
}

LorenzState lorenz_rk4_step(const LorenzParams& p, const LorenzState& s, double h) noexcept {
    auto axpy = [](const LorenzState& base, double scale, const LorenzState& d) {
        return LorenzState{base[0] + scale * d[0], base[1] + scale * d[1], base[2] + scale * d[2]};
    };
    const auto k1 = lorenz_derivative(p, s);
    const auto k2 = lorenz_derivative(p, axpy(s, h / 2.0, k1));
    const auto k3 = lorenz_derivative(p, axpy(s, h / 2.0, k2));
    const auto k4 = lorenz_derivative(p, axpy(s, h, k3));
    LorenzState next{};
    for (std::size_t i = 0; i < 3; ++i) {
        next[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return next;
}

std::vector<LorenzState> lorenz_trajectory(const LorenzParams& params) {
    params.validate();
    std::vector<LorenzState> out;
    out.reserve(params.steps - params.skip);
    LorenzState s = params.initial;
    for (std::size_t n = 0; n < params.steps; ++n) {
        s = lorenz_rk4_step(params, s, params.h);
        if (n >= params.skip) out.push_back(s);
    }
    return out;
}

TimeSeries lorenz_series(const LorenzParams& params) {
    const auto traj = lorenz_trajectory(params);
    std::vector<double> x(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) x[i] = traj[i][0];
    const double origin = params.h * static_cast<double>(params.skip + 1);
    return TimeSeries(std::move(x), params.h, SpacingUnit::Seconds, origin);
}

TimeSeries mackey_glass_series(const MackeyGlassParams& params) {
    params.validate();
    const std::size_t delay = params.delay_steps();
    const double h = params.h;
    auto rhs = [&](double x, double delayed) {
        return params.beta * delayed / (1.0 + std::pow(delayed, params.q)) - params.gamma * x;
    };

    // Ring buffer of the last delay+1 states; x_m lives at m mod (delay+1).
    // Everything before t = 0 is the constant pre-history x0.
    const std::size_t ring = delay + 1;
    std::vector<double> history(ring, params.x0);

    std::vector<double> out;
    out.reserve(params.steps - params.skip);
    double x = params.x0;
    for (std::size_t n = 0; n < params.steps; ++n) {
        const double lag_now = history[(n + 1) % ring];   // x(t_n - t0)
        const double lag_next = history[(n + 2) % ring];  // x(t_n + h - t0)
        const double lag_mid = 0.5 * (lag_now + lag_next);
        const double k1 = rhs(x, lag_now);
        const double k2 = rhs(x + h / 2.0 * k1, lag_mid);
        const double k3 = rhs(x + h / 2.0 * k2, lag_mid);
        const double k4 = rhs(x + h * k3, lag_next);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        history[(n + 1) % ring] = x;
        if (n >= params.skip) out.push_back(x);
    }
    const double origin = h * static_cast<double>(params.skip + 1);
    return TimeSeries(std::move(out), h, SpacingUnit::Seconds, origin);
}

TimeSeries sine_series(double amplitude, std::size_t period_samples, std::size_t n) {
    if (!std::isfinite(amplitude)) throw InvalidInput("sine amplitude must be finite");
    if (period_samples < 4) throw InvalidInput("sine period must be at least 4 samples");
    if (n < period_samples) throw InvalidInput("sine length must cover at least one period");
    std::vector<double> v(n);
    const double w = 2.0 * std::numbers::pi / static_cast<double>(period_samples);
    for (std::size_t t = 0; t < n; ++t) v[t] = amplitude * std::sin(w * static_cast<double>(t));
    return TimeSeries(std::move(v));
}

}  // namespace pemix
