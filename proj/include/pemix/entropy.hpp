#pragma once

#include <cstddef>
#include <vector>

#include "pemix/ordinal.hpp"
#include "pemix/time_series.hpp"

namespace pemix {

struct PEConfig {
    int ell = 4;
    std::size_t window = 5000;  ///< observations per sliding window
    int tau_min = 1;
    int tau_max = 6;
    std::size_t hop = 1;  ///< anchor advance between successive windows

    void validate() const;
    [[nodiscard]] int tau_count() const noexcept { return tau_max - tau_min + 1; }
};

/// Sliding-window PE for one stride. anchors[i] is the index of the last
/// observation of window i.
struct PETrace {
    int tau = 1;
    std::vector<std::size_t> anchors;
    std::vector<double> values;
};

/// One trace per tau in [tau_min, tau_max], all on the same anchors.
struct PETraceSet {
    int tau_min = 1;
    int tau_max = 1;
    std::vector<PETrace> traces;

    [[nodiscard]] const std::vector<std::size_t>& anchors() const;
    [[nodiscard]] const PETrace& trace(int tau) const;
    /// Throws InvalidInput when traces are missing, out of order, or not aligned.
    void validate() const;
};

/// Normalized Shannon entropy of a pattern distribution, natural log, with 0 log 0 = 0.
double permutation_entropy(const PatternDistribution& dist, int ell);

double global_pe(const TimeSeries& series, int ell, int tau);

PETrace windowed_pe(const TimeSeries& series, const PEConfig& config, int tau);

PETraceSet multi_tau_pe(const TimeSeries& series, const PEConfig& config);

}  // namespace pemix
