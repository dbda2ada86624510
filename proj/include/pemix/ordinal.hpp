#pragma once

// Ordinal patterns of strided windows and their empirical distribution.
//
// A pattern of length ell is the rank vector of ell values: ranks[i] is the
// position of values[i] in ascending order, 0 being the smallest. Equal values
// are ranked by time, so the earlier sample receives the smaller rank.
// Patterns are addressed by their lexicographic rank among the ell!
// permutations of 0..ell-1.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pemix/time_series.hpp"

namespace pemix {

/// Largest supported pattern length; ell! histograms above this are impractical.
inline constexpr int kMaxPatternLength = 10;

enum class TiePolicy : std::uint8_t { ByTime };

struct OrdinalPattern {
    std::vector<int> ranks;
    std::uint64_t index = 0;

    friend bool operator==(const OrdinalPattern&, const OrdinalPattern&) = default;
};

struct PatternConfig {
    int ell = 4;
    int tau = 1;
    TiePolicy tie_policy = TiePolicy::ByTime;

    /// Number of samples covered by one pattern: (ell-1)*tau + 1.
    [[nodiscard]] std::size_t span() const noexcept {
        return static_cast<std::size_t>(ell - 1) * static_cast<std::size_t>(tau) + 1;
    }
    void validate() const;
};

struct PatternDistribution {
    std::vector<double> probs;  ///< ell! entries, indexed by pattern index
    std::size_t count = 0;      ///< number of patterns tallied
};

/// ell!, for 0 <= ell <= 20.
std::uint64_t factorial(int ell);

OrdinalPattern ordinal_pattern(std::span<const double> values,
                               TiePolicy tie_policy = TiePolicy::ByTime);

/// Lexicographic rank of a permutation of 0..n-1. Throws InvalidInput otherwise.
std::uint64_t pattern_index(std::span<const int> ranks);

/// Inverse of pattern_index.
std::vector<int> index_to_pattern(std::uint64_t index, int ell);

/// Pattern index of the strided window values[first], values[first+tau], ...,
/// values[first+(ell-1)*tau], computed without materializing the rank vector.
/// No bounds or finiteness checks; callers validate.
std::uint64_t strided_pattern_index(std::span<const double> values, std::size_t first,
                                    int ell, int tau) noexcept;

/// Pattern index of every strided window whose samples lie in values[start, end).
/// Element i is the pattern starting at start + i.
std::vector<std::uint32_t> strided_pattern_codes(std::span<const double> values,
                                                 const PatternConfig& config,
                                                 std::size_t start, std::size_t end);

/// Tally of strided patterns whose samples all lie in [start, end). Probabilities
/// are normalized by the number of patterns actually extracted.
PatternDistribution pattern_distribution(const TimeSeries& series, const PatternConfig& config,
                                         std::size_t start, std::size_t end);

/// Whole-series convenience overload.
PatternDistribution pattern_distribution(const TimeSeries& series, const PatternConfig& config);

}  // namespace pemix
