#pragma once

// Plot-ready CSV files with a '#'-prefixed "key=value" metadata block.
//
//   series:     # pemix series v1 / time,value
//   pe traces:  # pemix pe-traces v1 / anchor,pe_tau<t>,...
//   reversal:   # pemix reversal v1 / anchor,r
//   sweep:      # pemix binsweep v1 / j,r_bar,data_sufficient
//
// Doubles are written in shortest round-trip form, so reading a file back
// reproduces the in-memory values exactly.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pemix/entropy.hpp"
#include "pemix/ingest.hpp"
#include "pemix/mixing.hpp"
#include "pemix/reversal.hpp"
#include "pemix/time_series.hpp"

namespace pemix {

class Metadata {
public:
    void set(std::string key, std::string value);
    void set(std::string key, double value);
    void set(std::string key, long long value);
    void set(std::string key, std::size_t value) { set(std::move(key), static_cast<long long>(value)); }
    void set(std::string key, int value) { set(std::move(key), static_cast<long long>(value)); }
    void set(std::string key, bool value) { set(std::move(key), std::string(value ? "true" : "false")); }
    void merge(const Metadata& other);

    [[nodiscard]] std::optional<std::string> get(std::string_view key) const;
    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const {
        return entries_;
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_double(double v);

/// Inclusive index spans as "a-b;c-d".
std::string format_spans(const std::vector<std::pair<std::size_t, std::size_t>>& spans);
std::vector<std::pair<std::size_t, std::size_t>> parse_spans(std::string_view text);

/// Records the series' spacing, unit, origin, and quality spans in the header.
void write_series_csv(const std::filesystem::path& path, const TimeSeries& series,
                      const Metadata& extra = {});

struct LoadedSeries {
    TimeSeries series;
    Metadata metadata;
};
LoadedSeries read_series_csv(const std::filesystem::path& path);

void write_traces_csv(const std::filesystem::path& path, const PETraceSet& traces,
                      const Metadata& extra = {});

struct LoadedTraces {
    PETraceSet traces;
    Metadata metadata;
};
LoadedTraces read_traces_csv(const std::filesystem::path& path);

/// value_column names the second column ("r" or "r_bar_window").
void write_reversal_csv(const std::filesystem::path& path, const ReversalSeries& rev,
                        const Metadata& extra = {}, std::string_view value_column = "r");

void write_sweep_csv(const std::filesystem::path& path, const BinSweepResult& sweep,
                     const Metadata& extra = {});

/// Metadata keys describing a cleaning report.
Metadata cleaning_metadata(const CleaningReport& report);

}  // namespace pemix
