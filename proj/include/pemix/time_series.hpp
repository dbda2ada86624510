#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pemix {

enum class SpacingUnit : std::uint8_t { Samples, Seconds, Meters };

std::string_view to_string(SpacingUnit unit);
SpacingUnit parse_spacing_unit(std::string_view text);

enum class Quality : std::uint8_t { Good, Filled, Suspect };

/// Uniformly spaced scalar observations. Missing observations are carried as NaN
/// until the series has been through fill_gaps().
struct TimeSeries {
    std::vector<double> values;
    double spacing = 1.0;
    SpacingUnit unit = SpacingUnit::Samples;
    double origin = 0.0;
    /// Empty, or one flag per value.
    std::vector<Quality> quality;

    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> v, double spacing_ = 1.0,
                        SpacingUnit unit_ = SpacingUnit::Samples, double origin_ = 0.0)
        : values(std::move(v)), spacing(spacing_), unit(unit_), origin(origin_) {}

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] bool empty() const noexcept { return values.empty(); }
    [[nodiscard]] std::span<const double> view() const noexcept { return values; }
    [[nodiscard]] double time_at(std::size_t i) const noexcept {
        return origin + spacing * static_cast<double>(i);
    }

    /// Throws InvalidInput if spacing is not positive or quality has the wrong length.
    void validate_metadata() const;
    /// validate_metadata() plus every value finite.
    void validate_clean() const;
};

}  // namespace pemix
