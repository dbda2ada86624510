#include "pemix/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pemix/errors.hpp"

namespace pemix {

namespace {

// Both the one-shot and the sliding path go through these two helpers so that
// their results agree bit for bit.
double plogp(double p) { return p * std::log(p); }

double finish_entropy(double sum_plogp, int ell) {
    const double h = -sum_plogp / std::log(static_cast<double>(factorial(ell)));
    if (!(h > 0.0)) return 0.0;
    return h > 1.0 ? 1.0 : h;
}

std::size_t checked_window_start_count(const TimeSeries& series, const PEConfig& config) {
    if (series.size() < config.window) {
        throw InsufficientData("series of length " + std::to_string(series.size()) +
                               " is shorter than one PE window of " +
                               std::to_string(config.window) + " observations");
    }
    return (series.size() - config.window) / config.hop + 1;
}

}  // namespace

void PEConfig::validate() const {
    if (ell < 2 || ell > kMaxPatternLength) {
        throw InvalidInput("ell must be in [2, " + std::to_string(kMaxPatternLength) + "], got " +
                           std::to_string(ell));
    }
    if (tau_min < 1) throw InvalidInput("tau_min must be >= 1");
    if (tau_max < tau_min) throw InvalidInput("tau_max must be >= tau_min");
    if (hop < 1) throw InvalidInput("hop must be >= 1");
    const std::size_t need =
        static_cast<std::size_t>(ell - 1) * static_cast<std::size_t>(tau_max) + 1;
    if (window < need) {
        throw InvalidInput("window " + std::to_string(window) + " is too small for ell=" +
                           std::to_string(ell) + ", tau_max=" + std::to_string(tau_max) +
                           "; need at least " + std::to_string(need));
    }
}

const std::vector<std::size_t>& PETraceSet::anchors() const {
    if (traces.empty()) throw InvalidInput("empty trace set");
    return traces.front().anchors;
}

const PETrace& PETraceSet::trace(int tau) const {
    if (tau < tau_min || tau > tau_max || traces.size() != static_cast<std::size_t>(tau_max - tau_min + 1)) {
        throw InvalidInput("no trace for tau=" + std::to_string(tau));
    }
    return traces[static_cast<std::size_t>(tau - tau_min)];
}

void PETraceSet::validate() const {
    if (tau_min < 1 || tau_max < tau_min) {
        throw InvalidInput("trace set has invalid tau range [" + std::to_string(tau_min) + ", " +
                           std::to_string(tau_max) + "]");
    }
    if (traces.size() != static_cast<std::size_t>(tau_max - tau_min + 1)) {
        throw InvalidInput("trace set holds " + std::to_string(traces.size()) +
                           " traces for a tau range of " + std::to_string(tau_max - tau_min + 1));
    }
    const auto& ref = traces.front().anchors;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const auto& t = traces[i];
        if (t.tau != tau_min + static_cast<int>(i)) {
            throw InvalidInput("trace " + std::to_string(i) + " has tau=" + std::to_string(t.tau) +
                               ", expected " + std::to_string(tau_min + static_cast<int>(i)));
        }
        if (t.values.size() != t.anchors.size()) {
            throw InvalidInput("trace tau=" + std::to_string(t.tau) +
                               " has mismatched anchor and value counts");
        }
        if (t.anchors != ref) {
            throw InvalidInput("trace tau=" + std::to_string(t.tau) +
                               " is not aligned with trace tau=" + std::to_string(tau_min));
        }
    }
}

double permutation_entropy(const PatternDistribution& dist, int ell) {
    if (dist.count == 0) throw InsufficientData("pattern distribution is empty");
    if (dist.probs.size() != factorial(ell)) {
        throw InvalidInput("distribution has " + std::to_string(dist.probs.size()) +
                           " entries, expected ell! = " + std::to_string(factorial(ell)));
    }
    double sum = 0.0;
    for (const double p : dist.probs) {
        if (p > 0.0) sum += plogp(p);
    }
    return finish_entropy(sum, ell);
}

double global_pe(const TimeSeries& series, int ell, int tau) {
    const PatternConfig config{ell, tau, TiePolicy::ByTime};
    return permutation_entropy(pattern_distribution(series, config), ell);
}

PETrace windowed_pe(const TimeSeries& series, const PEConfig& config, int tau) {
    config.validate();
    if (tau < config.tau_min || tau > config.tau_max) {
        throw InvalidInput("tau=" + std::to_string(tau) + " outside configured range [" +
                           std::to_string(config.tau_min) + ", " + std::to_string(config.tau_max) +
                           "]");
    }
    const std::size_t n_windows = checked_window_start_count(series, config);
    const PatternConfig pcfg{config.ell, tau, TiePolicy::ByTime};
    const auto codes = strided_pattern_codes(series.view(), pcfg, 0, series.size());

    const std::size_t w = config.window;
    const std::size_t per_window = w - pcfg.span() + 1;
    const auto total = static_cast<double>(per_window);

    // Every window holds the same number of patterns, so p log p can be tabulated by count.
    std::vector<double> term(per_window + 1, 0.0);
    for (std::size_t c = 1; c <= per_window; ++c) {
        term[c] = plogp(static_cast<double>(c) / total);
    }

    std::vector<std::size_t> hist(factorial(config.ell), 0);
    for (std::size_t s = 0; s < per_window; ++s) ++hist[codes[s]];

    PETrace out;
    out.tau = tau;
    out.anchors.resize(n_windows);
    out.values.resize(n_windows);
    std::size_t first = 0;  // first pattern start in the current window
    for (std::size_t i = 0; i < n_windows; ++i) {
        if (i > 0) {
            const std::size_t next = first + config.hop;
            if (config.hop >= per_window) {
                std::fill(hist.begin(), hist.end(), 0);
                for (std::size_t s = next; s < next + per_window; ++s) ++hist[codes[s]];
            } else {
                for (std::size_t s = first; s < next; ++s) --hist[codes[s]];
                for (std::size_t s = first + per_window; s < next + per_window; ++s) ++hist[codes[s]];
            }
            first = next;
        }
        double sum = 0.0;
        for (const std::size_t c : hist) {
            if (c > 0) sum += term[c];
        }
        out.anchors[i] = first + w - 1;
        out.values[i] = finish_entropy(sum, config.ell);
    }
    return out;
}

PETraceSet multi_tau_pe(const TimeSeries& series, const PEConfig& config) {
    config.validate();
    checked_window_start_count(series, config);
    PETraceSet set;
    set.tau_min = config.tau_min;
    set.tau_max = config.tau_max;
    set.traces.reserve(static_cast<std::size_t>(config.tau_count()));
    for (int tau = config.tau_min; tau <= config.tau_max; ++tau) {
        set.traces.push_back(windowed_pe(series, config, tau));
    }
    return set;
}

}  // namespace pemix
