#pragma once

// Tau-reversal metric over aligned PE traces.
//
// At each anchor the strides are sorted by ascending PE to form the focal
// tau-sequence. Its L1 (Spearman footrule) distance to the increasing vector
// [tau_min, ..., tau_max], divided by the largest distance any permutation can
// reach, gives R in [0, 1]: 0 for PE increasing with tau, 1 for the full reversal.

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "pemix/entropy.hpp"

namespace pemix {

struct FocalTauVector {
    std::vector<int> order;  ///< strides sorted by ascending PE; PE ties by ascending tau

    friend bool operator==(const FocalTauVector&, const FocalTauVector&) = default;
};

struct MonotoneReference {
    std::vector<int> v_i;  ///< tau_min, ..., tau_max
    double lambda = 0.0;

    static MonotoneReference for_range(int tau_min, int tau_max);
    [[nodiscard]] int tau_min() const { return v_i.front(); }
    [[nodiscard]] int tau_max() const { return v_i.back(); }
    /// The reversed vector, the unique configuration with R = 1.
    [[nodiscard]] std::vector<int> v_d() const;
};

struct ReversalSeries {
    std::vector<std::size_t> anchors;
    std::vector<double> r_values;
    double r_bar = 0.0;
};

/// pe_at_anchor must hold exactly one finite value for every tau of a contiguous range.
FocalTauVector focal_tau_vector(const std::map<int, double>& pe_at_anchor);

/// Same, for PE values of strides tau_min, tau_min+1, ... given as a span.
FocalTauVector focal_tau_vector(std::span<const double> pe_by_tau, int tau_min);

double lambda_for_range(int tau_min, int tau_max);

double reversal_metric(const FocalTauVector& v, const MonotoneReference& ref);

ReversalSeries reversal_series(const PETraceSet& traces);

/// Mean R over anchor positions [first, last], both inclusive.
double segment_rbar(const ReversalSeries& rev, std::size_t first, std::size_t last);

/// Sliding mean of R over `window` consecutive anchors, advanced by `hop`,
/// anchored at each window's last anchor.
ReversalSeries windowed_rbar(const ReversalSeries& rev, std::size_t window = 5000,
                             std::size_t hop = 1);

}  // namespace pemix
