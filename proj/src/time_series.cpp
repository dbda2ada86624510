#include "pemix/time_series.hpp"

#include <cmath>

#include "pemix/errors.hpp"

namespace pemix {

std::string_view to_string(SpacingUnit unit) {
    switch (unit) {
        case SpacingUnit::Samples: return "samples";
        case SpacingUnit::Seconds: return "seconds";
        case SpacingUnit::Meters: return "meters";
    }
    return "samples";
}

SpacingUnit parse_spacing_unit(std::string_view text) {
    if (text == "samples") return SpacingUnit::Samples;
    if (text == "seconds") return SpacingUnit::Seconds;
    if (text == "meters") return SpacingUnit::Meters;
    throw InvalidInput("unknown spacing unit '" + std::string(text) +
                       "' (expected samples, seconds or meters)");
}

void TimeSeries::validate_metadata() const {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw InvalidInput("time series spacing must be positive and finite");
    }
    if (!quality.empty() && quality.size() != values.size()) {
        throw InvalidInput("quality flag count " + std::to_string(quality.size()) +
                           " does not match value count " + std::to_string(values.size()));
    }
}

void TimeSeries::validate_clean() const {
    validate_metadata();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw InvalidInput("non-finite value at position " + std::to_string(i));
        }
    }
}

}  // namespace pemix
