#include "pemix/ordinal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pemix/errors.hpp"

namespace pemix {

namespace {

constexpr std::uint64_t kFactorials[] = {1ULL,
                                         1ULL,
                                         2ULL,
                                         6ULL,
                                         24ULL,
                                         120ULL,
                                         720ULL,
                                         5040ULL,
                                         40320ULL,
                                         362880ULL,
                                         3628800ULL,
                                         39916800ULL,
                                         479001600ULL,
                                         6227020800ULL,
                                         87178291200ULL,
                                         1307674368000ULL,
                                         20922789888000ULL,
                                         355687428096000ULL,
                                         6402373705728000ULL,
                                         121645100408832000ULL,
                                         2432902008176640000ULL};

void check_finite_range(std::span<const double> values, std::size_t start, std::size_t end) {
    for (std::size_t i = start; i < end; ++i) {
        if (!std::isfinite(values[i])) {
            throw InvalidInput("non-finite value at position " + std::to_string(i));
        }
    }
}

}  // namespace

void PatternConfig::validate() const {
    if (ell < 2 || ell > kMaxPatternLength) {
        throw InvalidInput("pattern length ell must be in [2, " +
                           std::to_string(kMaxPatternLength) + "], got " + std::to_string(ell));
    }
    if (tau < 1) {
        throw InvalidInput("stride tau must be >= 1, got " + std::to_string(tau));
    }
}

std::uint64_t factorial(int ell) {
    if (ell < 0 || ell > 20) {
        throw InvalidInput("factorial argument out of range: " + std::to_string(ell));
    }
    return kFactorials[ell];
}

OrdinalPattern ordinal_pattern(std::span<const double> values, TiePolicy /*tie_policy*/) {
    const std::size_t n = values.size();
    if (n < 2) {
        throw InvalidInput("ordinal pattern needs at least 2 values, got " + std::to_string(n));
    }
    if (n > static_cast<std::size_t>(kMaxPatternLength)) {
        throw InvalidInput("ordinal pattern length " + std::to_string(n) + " exceeds " +
                           std::to_string(kMaxPatternLength));
    }
    check_finite_range(values, 0, n);

    // ByTime: a stable sort keeps equal values in temporal order.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });

    OrdinalPattern out;
    out.ranks.resize(n);
    for (std::size_t r = 0; r < n; ++r) out.ranks[order[r]] = static_cast<int>(r);
    out.index = pattern_index(out.ranks);
    return out;
}

std::uint64_t pattern_index(std::span<const int> ranks) {
    const std::size_t n = ranks.size();
    if (n == 0 || n > 20) {
        throw InvalidInput("permutation length must be in [1, 20], got " + std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const int r = ranks[i];
        if (r < 0 || static_cast<std::size_t>(r) >= n || seen[r]) {
            throw InvalidInput("not a permutation of 0.." + std::to_string(n - 1) +
                               ": bad entry at position " + std::to_string(i));
        }
        seen[r] = true;
    }
    // Lehmer code: digit i counts later entries smaller than entry i.
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t smaller = 0;
        for (std::size_t j = i + 1; j < n; ++j) smaller += ranks[j] < ranks[i] ? 1 : 0;
        index += smaller * kFactorials[n - 1 - i];
    }
    return index;
}

std::vector<int> index_to_pattern(std::uint64_t index, int ell) {
    if (ell < 1 || ell > 20) {
        throw InvalidInput("pattern length must be in [1, 20], got " + std::to_string(ell));
    }
    if (index >= kFactorials[ell]) {
        throw InvalidInput("pattern index " + std::to_string(index) + " out of range for ell=" +
                           std::to_string(ell));
    }
    std::vector<int> remaining(ell);
    std::iota(remaining.begin(), remaining.end(), 0);
    std::vector<int> ranks;
    ranks.reserve(ell);
    for (int i = 0; i < ell; ++i) {
        const std::uint64_t f = kFactorials[ell - 1 - i];
        const auto digit = static_cast<std::size_t>(index / f);
        index %= f;
        ranks.push_back(remaining[digit]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(digit));
    }
    return ranks;
}

std::uint64_t strided_pattern_index(std::span<const double> values, std::size_t first, int ell,
                                    int tau) noexcept {
    // Under ByTime ties, a later sample ranks below an earlier one exactly when its
    // value is strictly smaller, so the Lehmer digits come straight from comparisons.
    std::uint64_t index = 0;
    const auto stride = static_cast<std::size_t>(tau);
    for (int i = 0; i < ell - 1; ++i) {
        const double xi = values[first + static_cast<std::size_t>(i) * stride];
        std::uint64_t smaller = 0;
        for (int j = i + 1; j < ell; ++j) {
            smaller += values[first + static_cast<std::size_t>(j) * stride] < xi ? 1 : 0;
        }
        index += smaller * kFactorials[ell - 1 - i];
    }
    return index;
}

std::vector<std::uint32_t> strided_pattern_codes(std::span<const double> values,
                                                 const PatternConfig& config, std::size_t start,
                                                 std::size_t end) {
    config.validate();
    if (end > values.size() || start > end) {
        throw InvalidInput("pattern range [" + std::to_string(start) + ", " + std::to_string(end) +
                           ") outside series of length " + std::to_string(values.size()));
    }
    const std::size_t span = config.span();
    if (end - start < span) {
        throw InsufficientData("range of " + std::to_string(end - start) +
                               " samples is too short; need at least " + std::to_string(span) +
                               " for ell=" + std::to_string(config.ell) +
                               ", tau=" + std::to_string(config.tau));
    }
    check_finite_range(values, start, end);

    std::vector<std::uint32_t> codes(end - start - span + 1);
    for (std::size_t i = 0; i < codes.size(); ++i) {
        codes[i] = static_cast<std::uint32_t>(
            strided_pattern_index(values, start + i, config.ell, config.tau));
    }
    return codes;
}

PatternDistribution pattern_distribution(const TimeSeries& series, const PatternConfig& config,
                                         std::size_t start, std::size_t end) {
    const auto codes = strided_pattern_codes(series.view(), config, start, end);
    std::vector<std::size_t> tally(factorial(config.ell), 0);
    for (const auto c : codes) ++tally[c];

    PatternDistribution dist;
    dist.count = codes.size();
    dist.probs.resize(tally.size());
    const auto total = static_cast<double>(dist.count);
    for (std::size_t k = 0; k < tally.size(); ++k) {
        dist.probs[k] = static_cast<double>(tally[k]) / total;
    }
    return dist;
}

PatternDistribution pattern_distribution(const TimeSeries& series, const PatternConfig& config) {
    return pattern_distribution(series, config, 0, series.size());
}

}  // namespace pemix
