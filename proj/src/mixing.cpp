#include "pemix/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pemix/errors.hpp"
#include "pemix/reversal.hpp"

namespace pemix {

double NormalStream::next() {
    constexpr double kScale = 0x1.0p-53;
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * kScale;  // (0, 1]
    const double u2 = static_cast<double>(engine_() >> 11) * kScale;        // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

WindowBounds ansatz_window(std::size_t n, std::size_t k, std::size_t size) noexcept {
    const std::size_t first = n >= k ? n - k : 0;
    const std::size_t last = std::min(size, n + k + 1);
    return {first, last};
}

TimeSeries mixing_ansatz(const TimeSeries& series, const AnsatzConfig& config) {
    series.validate_clean();
    const std::size_t n = series.size();
    if (n <= 2 * config.k) {
        throw InsufficientData("mixing ansatz with k=" + std::to_string(config.k) +
                               " needs more than " + std::to_string(2 * config.k) +
                               " points, got " + std::to_string(n));
    }
    const auto& x = series.values;
    TimeSeries out = series;
    NormalStream normal(config.seed);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [first, last] = ansatz_window(i, config.k, n);
        const auto m = static_cast<double>(last - first);
        // Centering on x_i keeps the mean exact when the window is constant.
        const double center = x[i];
        double dev = 0.0;
        for (std::size_t t = first; t < last; ++t) dev += x[t] - center;
        const double mean = center + dev / m;
        double ss = 0.0;
        for (std::size_t t = first; t < last; ++t) ss += (x[t] - mean) * (x[t] - mean);
        const double sigma = last - first > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
        const double z = normal.next();
        out.values[i] = sigma > 0.0 ? mean + sigma * z : mean;
    }
    return out;
}

TimeSeries bin_average(const TimeSeries& series, std::size_t j) {
    series.validate_metadata();
    if (j < 1) throw InvalidInput("bin size j must be >= 1");
    if (series.size() < j) {
        throw InvalidInput("bin size " + std::to_string(j) + " exceeds series length " +
                           std::to_string(series.size()));
    }
    const std::size_t m = series.size() / j;
    TimeSeries out;
    out.values.resize(m);
    out.spacing = series.spacing * static_cast<double>(j);
    out.unit = series.unit;
    out.origin = series.origin;
    for (std::size_t b = 0; b < m; ++b) {
        double sum = 0.0;
        for (std::size_t i = b * j; i < (b + 1) * j; ++i) sum += series.values[i];
        out.values[b] = sum / static_cast<double>(j);
    }
    if (!series.quality.empty()) {
        // A bin inherits the worst flag of its members.
        out.quality.resize(m, Quality::Good);
        for (std::size_t b = 0; b < m; ++b) {
            for (std::size_t i = b * j; i < (b + 1) * j; ++i) {
                out.quality[b] = std::max(out.quality[b], series.quality[i]);
            }
        }
    }
    return out;
}

BinSweepResult recommend_bin_size(std::vector<std::size_t> bin_sizes, std::vector<double> r_bars,
                                  std::vector<bool> data_sufficient) {
    if (bin_sizes.size() != r_bars.size() || bin_sizes.size() != data_sufficient.size()) {
        throw InvalidInput("bin sweep vectors differ in length");
    }
    std::vector<std::size_t> valid;
    for (std::size_t i = 0; i < bin_sizes.size(); ++i) {
        if (data_sufficient[i]) valid.push_back(i);
    }
    if (valid.empty()) {
        throw InsufficientData("no bin size left enough data for a single PE window");
    }

    BinSweepResult out{std::move(bin_sizes), std::move(r_bars), std::move(data_sufficient), 0,
                       false};
    const auto r = [&](std::size_t v) { return out.r_bars[valid[v]]; };

    for (std::size_t v = 0; v < valid.size(); ++v) {
        if (std::abs(r(v)) <= kZeroRbarTolerance) {
            out.recommended_j = out.bin_sizes[valid[v]];
            out.achieved_zero = true;
            return out;
        }
    }
    // First local minimum: r[v] <= r[v-1] and r[v] < r[v+1]; absent neighbours pass.
    // A qualifying entry always exists (the end of the first global-minimum plateau).
    const std::size_t m = valid.size();
    std::size_t pick = 0;
    for (std::size_t v = 0; v < m; ++v) {
        const bool left = v == 0 || r(v) <= r(v - 1);
        const bool right = v + 1 == m || r(v) < r(v + 1);
        if (left && right) {
            pick = v;
            while (pick > 0 && r(pick - 1) == r(pick)) --pick;
            break;
        }
    }
    out.recommended_j = out.bin_sizes[valid[pick]];
    out.achieved_zero = false;
    return out;
}

BinSweepResult bin_sweep(const TimeSeries& series, std::size_t j_min, std::size_t j_max,
                         const PEConfig& pe_config) {
    pe_config.validate();
    if (j_min < 1 || j_max < j_min) {
        throw InvalidInput("bin sweep range must satisfy 1 <= j_min <= j_max");
    }
    std::vector<std::size_t> sizes;
    std::vector<double> r_bars;
    std::vector<bool> sufficient;
    for (std::size_t j = j_min; j <= j_max; ++j) {
        sizes.push_back(j);
        if (series.size() / j < pe_config.window) {
            r_bars.push_back(std::numeric_limits<double>::quiet_NaN());
            sufficient.push_back(false);
            continue;
        }
        const auto binned = bin_average(series, j);
        r_bars.push_back(reversal_series(multi_tau_pe(binned, pe_config)).r_bar);
        sufficient.push_back(true);
    }
    return recommend_bin_size(std::move(sizes), std::move(r_bars), std::move(sufficient));
}

}  // namespace pemix
