#include "pemix/reversal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "pemix/errors.hpp"

namespace pemix {

namespace {

long footrule_distance(std::span<const int> v, std::span<const int> ref) {
    long d = 0;
    for (std::size_t i = 0; i < v.size(); ++i) d += std::labs(long{v[i]} - long{ref[i]});
    return d;
}

}  // namespace

MonotoneReference MonotoneReference::for_range(int tau_min, int tau_max) {
    MonotoneReference ref;
    ref.lambda = lambda_for_range(tau_min, tau_max);
    ref.v_i.resize(static_cast<std::size_t>(tau_max - tau_min + 1));
    std::iota(ref.v_i.begin(), ref.v_i.end(), tau_min);
    return ref;
}

std::vector<int> MonotoneReference::v_d() const { return {v_i.rbegin(), v_i.rend()}; }

FocalTauVector focal_tau_vector(std::span<const double> pe_by_tau, int tau_min) {
    if (pe_by_tau.empty()) throw InvalidInput("focal tau vector needs at least one PE value");
    for (std::size_t i = 0; i < pe_by_tau.size(); ++i) {
        if (!std::isfinite(pe_by_tau[i])) {
            throw InvalidInput("non-finite PE value for tau=" +
                               std::to_string(tau_min + static_cast<int>(i)));
        }
    }
    FocalTauVector v;
    v.order.resize(pe_by_tau.size());
    std::iota(v.order.begin(), v.order.end(), tau_min);
    std::stable_sort(v.order.begin(), v.order.end(), [&](int a, int b) {
        return pe_by_tau[static_cast<std::size_t>(a - tau_min)] <
               pe_by_tau[static_cast<std::size_t>(b - tau_min)];
    });
    return v;
}

FocalTauVector focal_tau_vector(const std::map<int, double>& pe_at_anchor) {
    if (pe_at_anchor.empty()) throw InvalidInput("focal tau vector needs at least one PE value");
    const int tau_min = pe_at_anchor.begin()->first;
    const int tau_max = pe_at_anchor.rbegin()->first;
    std::vector<double> values;
    values.reserve(pe_at_anchor.size());
    int expected = tau_min;
    for (const auto& [tau, pe] : pe_at_anchor) {
        if (tau != expected) {
            throw InvalidInput("missing PE value for tau=" + std::to_string(expected) +
                               " in range [" + std::to_string(tau_min) + ", " +
                               std::to_string(tau_max) + "]");
        }
        values.push_back(pe);
        ++expected;
    }
    return focal_tau_vector(values, tau_min);
}

double lambda_for_range(int tau_min, int tau_max) {
    if (tau_max <= tau_min) {
        throw InvalidInput("reversal metric needs at least two strides; got range [" +
                           std::to_string(tau_min) + ", " + std::to_string(tau_max) + "]");
    }
    // The reversal maximizes the footrule distance: floor(m^2 / 2) for m strides.
    const long m = long{tau_max} - long{tau_min} + 1;
    return static_cast<double>(m * m / 2);
}

double reversal_metric(const FocalTauVector& v, const MonotoneReference& ref) {
    if (v.order.size() != ref.v_i.size()) {
        throw InvalidInput("focal vector covers " + std::to_string(v.order.size()) +
                           " strides but reference covers " + std::to_string(ref.v_i.size()));
    }
    std::vector<int> sorted = v.order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != ref.v_i) {
        throw InvalidInput("focal vector is not a permutation of the reference stride range [" +
                           std::to_string(ref.tau_min()) + ", " + std::to_string(ref.tau_max()) +
                           "]");
    }
    return static_cast<double>(footrule_distance(v.order, ref.v_i)) / ref.lambda;
}

ReversalSeries reversal_series(const PETraceSet& traces) {
    traces.validate();
    const auto ref = MonotoneReference::for_range(traces.tau_min, traces.tau_max);
    const auto& anchors = traces.anchors();
    const std::size_t n = anchors.size();

    ReversalSeries out;
    out.anchors = anchors;
    out.r_values.resize(n);
    std::vector<double> pe(traces.traces.size());
    long total_distance = 0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t t = 0; t < pe.size(); ++t) pe[t] = traces.traces[t].values[a];
        const auto v = focal_tau_vector(pe, traces.tau_min);
        const long d = footrule_distance(v.order, ref.v_i);
        total_distance += d;
        out.r_values[a] = static_cast<double>(d) / ref.lambda;
    }
    out.r_bar = n == 0 ? 0.0
                       : static_cast<double>(total_distance) / (ref.lambda * static_cast<double>(n));
    return out;
}

double segment_rbar(const ReversalSeries& rev, std::size_t first, std::size_t last) {
    if (first > last || last >= rev.r_values.size()) {
        throw InvalidInput("segment [" + std::to_string(first) + ", " + std::to_string(last) +
                           "] outside reversal series of length " +
                           std::to_string(rev.r_values.size()));
    }
    double sum = 0.0;
    for (std::size_t i = first; i <= last; ++i) sum += rev.r_values[i];
    return sum / static_cast<double>(last - first + 1);
}

ReversalSeries windowed_rbar(const ReversalSeries& rev, std::size_t window, std::size_t hop) {
    if (window < 1) throw InvalidInput("windowed R-bar window must be >= 1");
    if (hop < 1) throw InvalidInput("windowed R-bar hop must be >= 1");
    const std::size_t n = rev.r_values.size();
    if (rev.anchors.size() != n) {
        throw InvalidInput("reversal series has mismatched anchor and value counts");
    }
    if (window > n) {
        throw InsufficientData("windowed R-bar window of " + std::to_string(window) +
                               " exceeds the " + std::to_string(n) + " available anchors");
    }

    ReversalSeries out;
    const std::size_t count = (n - window) / hop + 1;
    out.anchors.reserve(count);
    out.r_values.reserve(count);
    // Kahan-compensated running sum over the window.
    double sum = 0.0;
    double comp = 0.0;
    auto add = [&](double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    for (std::size_t i = 0; i < window; ++i) add(rev.r_values[i]);
    std::size_t first = 0;
    for (std::size_t k = 0; k < count; ++k) {
        if (k > 0) {
            const std::size_t next = first + hop;
            if (hop >= window) {
                sum = 0.0;
                comp = 0.0;
                for (std::size_t i = next; i < next + window; ++i) add(rev.r_values[i]);
            } else {
                for (std::size_t i = first; i < next; ++i) add(-rev.r_values[i]);
                for (std::size_t i = first + window; i < next + window; ++i) add(rev.r_values[i]);
            }
            first = next;
        }
        const double mean = sum / static_cast<double>(window);
        out.anchors.push_back(rev.anchors[first + window - 1]);
        out.r_values.push_back(std::clamp(mean, 0.0, 1.0));
    }
    double total = 0.0;
    for (const double r : out.r_values) total += r;
    out.r_bar = total / static_cast<double>(out.r_values.size());
    return out;
}

}  // namespace pemix
