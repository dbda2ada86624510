#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "pemix/entropy.hpp"
#include "pemix/time_series.hpp"

namespace pemix {

/// Identifier of the random stream used by mixing_ansatz, recorded in run metadata.
inline constexpr std::string_view kAnsatzRngAlgorithm = "mt19937_64+box-muller-cos";

/// Standard normal draws with a fixed, platform-independent recipe: two 53-bit
/// uniforms from mt19937_64 per draw, cosine branch of Box-Muller.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
    double next();

private:
    std::mt19937_64 engine_;
};

struct AnsatzConfig {
    std::size_t k = 3;  ///< half-width; the window spans 2k+1 points
    std::uint64_t seed = 1;
};

/// Clipped window [n-k, n+k] ∩ [0, size) as a half-open index range.
struct WindowBounds {
    std::size_t first;
    std::size_t last;  ///< one past the end
};
WindowBounds ansatz_window(std::size_t n, std::size_t k, std::size_t size) noexcept;

/// Replaces each point by one draw from Normal(mu_n, sigma_n^2), where mu_n and
/// sigma_n are the sample mean and sample standard deviation of its clipped
/// window. Deterministic for a given seed.
TimeSeries mixing_ansatz(const TimeSeries& series, const AnsatzConfig& config);

/// Non-rolling block means of j consecutive points; the trailing remainder is dropped.
TimeSeries bin_average(const TimeSeries& series, std::size_t j);

struct BinSweepResult {
    std::vector<std::size_t> bin_sizes;
    std::vector<double> r_bars;          ///< NaN where the binned series was too short
    std::vector<bool> data_sufficient;
    std::size_t recommended_j = 0;
    bool achieved_zero = false;
};

inline constexpr double kZeroRbarTolerance = 1e-12;

/// Applies the bin-size heuristic to a precomputed R-bar curve: the smallest j
/// with R-bar = 0, otherwise the first local minimum (plateaus resolve to their
/// smallest j). Entries with data_sufficient false are ignored.
BinSweepResult recommend_bin_size(std::vector<std::size_t> bin_sizes, std::vector<double> r_bars,
                                  std::vector<bool> data_sufficient);

/// R-bar of the multi-tau PE traces of bin_average(series, j) for j in [j_min, j_max].
BinSweepResult bin_sweep(const TimeSeries& series, std::size_t j_min, std::size_t j_max,
                         const PEConfig& pe_config);

}  // namespace pemix
