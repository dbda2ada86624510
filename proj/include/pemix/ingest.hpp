#pragma once

// Loading and cleaning of externally measured series: delimited text in,
// uniformly spaced gap-free TimeSeries out.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pemix/time_series.hpp"

namespace pemix {

struct Record {
    double time = 0.0;
    std::optional<double> value;  ///< nullopt marks a missing cell
    bool suspect = false;         ///< quality flag column said "not good"
};

enum class HeaderPolicy { Auto, Present, Absent };

struct CsvOptions {
    /// Column name (requires a header) or 0-based index written as digits.
    std::string time_column = "0";
    std::string value_column = "1";
    HeaderPolicy header = HeaderPolicy::Auto;
    /// '\0' picks comma when the first data line has one, whitespace otherwise.
    char delimiter = '\0';
    /// Numeric sentinels that mean "missing", e.g. -999.99.
    std::vector<double> missing_values;
    /// Optional quality flag column; rows whose flag differs from good_flag are suspect.
    std::optional<std::string> flag_column;
    std::string good_flag = "...";
};

/// Numeric offset, or ISO-8601 date-time ("2019-04-11T00:05:00Z",
/// "2019-04-11 00:05", "2019-04-11") as seconds since the Unix epoch.
std::optional<double> parse_timestamp(std::string_view text);

/// Ordered (time, value) records. Non-numeric or sentinel cells become missing.
std::vector<Record> load_csv(const std::filesystem::path& path, const CsvOptions& options);

/// Median positive spacing between consecutive records.
double native_spacing(const std::vector<Record>& records);

/// Nearest-record-to-grid-time resampling onto origin + i * target_spacing, with
/// origin at the first record. Empty cells become NaN; cells holding only suspect
/// records become NaN flagged Suspect.
TimeSeries regularize(const std::vector<Record>& records, double target_spacing,
                      SpacingUnit unit = SpacingUnit::Seconds);

struct CleaningReport {
    std::size_t n_missing_filled = 0;
    std::size_t n_suspect_removed = 0;
    /// Runs of imputed points, inclusive [first, last] indices.
    std::vector<std::pair<std::size_t, std::size_t>> gap_spans;
};

/// Last-good-value imputation of every NaN. Imputed points are flagged Filled,
/// or keep Suspect when they were removed for quality reasons.
std::pair<TimeSeries, CleaningReport> fill_gaps(const TimeSeries& series);

enum class PrefilterMethod { None, MovingMedian };

PrefilterMethod parse_prefilter_method(std::string_view text);

/// Centered moving median with the window clipped at the edges (even-sized
/// clipped windows take the mean of the two middle values).
TimeSeries prefilter(const TimeSeries& series, PrefilterMethod method, std::size_t width = 3);

}  // namespace pemix
