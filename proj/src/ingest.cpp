#include "pemix/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "pemix/errors.hpp"

namespace pemix {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

bool read_int(std::string_view s, std::size_t& pos, std::size_t digits, int& out) {
    if (pos + digits > s.size()) return false;
    int v = 0;
    for (std::size_t i = 0; i < digits; ++i) {
        const char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    pos += digits;
    return true;
}

bool expect(std::string_view s, std::size_t& pos, char c) {
    if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
    }
    return false;
}

std::optional<double> parse_iso8601(std::string_view s) {
    std::size_t pos = 0;
    int year = 0, month = 0, day = 0, hour = 0, minute = 0;
    double second = 0.0;
    if (!read_int(s, pos, 4, year) || !expect(s, pos, '-') || !read_int(s, pos, 2, month) ||
        !expect(s, pos, '-') || !read_int(s, pos, 2, day)) {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{year},
                                          std::chrono::month{static_cast<unsigned>(month)},
                                          std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) return std::nullopt;

    if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
        ++pos;
        if (!read_int(s, pos, 2, hour) || !expect(s, pos, ':') || !read_int(s, pos, 2, minute)) {
            return std::nullopt;
        }
        if (expect(s, pos, ':')) {
            const std::size_t start = pos;
            while (pos < s.size() && ((s[pos] >= '0' && s[pos] <= '9') || s[pos] == '.')) ++pos;
            const auto sec = parse_number(s.substr(start, pos - start));
            if (!sec) return std::nullopt;
            second = *sec;
        }
    }
    double offset = 0.0;
    if (pos < s.size()) {
        if (s[pos] == 'Z') {
            ++pos;
        } else if (s[pos] == '+' || s[pos] == '-') {
            const double sign = s[pos] == '-' ? -1.0 : 1.0;
            ++pos;
            int oh = 0, om = 0;
            if (!read_int(s, pos, 2, oh)) return std::nullopt;
            expect(s, pos, ':');
            if (!read_int(s, pos, 2, om)) return std::nullopt;
            offset = sign * (oh * 3600.0 + om * 60.0);
        }
    }
    if (pos != s.size() || hour > 23 || minute > 59 || second >= 61.0) return std::nullopt;

    const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return static_cast<double>(days) * 86400.0 + hour * 3600.0 + minute * 60.0 + second - offset;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> out;
    if (delimiter == ' ') {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            if (i >= line.size()) break;
            const std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
            out.push_back(line.substr(start, i - start));
        }
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto next = line.find(delimiter, start);
        out.push_back(trim(line.substr(start, next - start)));
        if (next == std::string_view::npos) break;
        start = next + 1;
    }
    return out;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::size_t resolve_column(const std::string& ref, const std::vector<std::string>& header,
                           const char* role) {
    if (!header.empty()) {
        const auto it = std::find(header.begin(), header.end(), ref);
        if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
    }
    if (all_digits(ref)) return std::stoul(ref);
    throw InvalidInput(std::string(role) + " column '" + ref + "' not found" +
                       (header.empty() ? " (file has no header row)" : " in header"));
}

}  // namespace

std::optional<double> parse_timestamp(std::string_view text) {
    text = trim(text);
    if (auto v = parse_number(text)) return v;
    return parse_iso8601(text);
}

std::vector<Record> load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

    std::vector<Record> records;
    std::vector<std::string> header;
    bool first_line = true;
    char delimiter = options.delimiter;
    std::size_t time_col = 0, value_col = 0;
    std::optional<std::size_t> flag_col;
    std::size_t line_no = 0;
    std::size_t usable = 0;
    std::string line;

    while (std::getline(in, line)) {
        ++line_no;
        const auto view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        if (delimiter == '\0') delimiter = view.find(',') != std::string_view::npos ? ',' : ' ';
        const auto fields = split(view, delimiter);

        if (first_line) {
            first_line = false;
            bool is_header = options.header == HeaderPolicy::Present;
            if (options.header == HeaderPolicy::Auto) {
                // A header row is one whose time cell is not a timestamp.
                std::size_t probe = all_digits(options.time_column) ? std::stoul(options.time_column) : 0;
                is_header = !all_digits(options.time_column) || probe >= fields.size() ||
                            !parse_timestamp(fields[probe]).has_value();
            }
            if (is_header) {
                for (const auto f : fields) header.emplace_back(f);
            }
            time_col = resolve_column(options.time_column, header, "time");
            value_col = resolve_column(options.value_column, header, "value");
            if (options.flag_column) flag_col = resolve_column(*options.flag_column, header, "flag");
            const std::size_t width = header.empty() ? fields.size() : header.size();
            const std::size_t need = std::max({time_col, value_col, flag_col.value_or(0)}) + 1;
            if (need > width) {
                throw InvalidInput("column index " + std::to_string(need - 1) + " out of range: '" +
                                   path.string() + "' has " + std::to_string(width) + " columns");
            }
            if (is_header) continue;
        }

        if (time_col >= fields.size()) {
            throw IoError("line " + std::to_string(line_no) + " of '" + path.string() +
                          "' has no time field");
        }
        const auto t = parse_timestamp(fields[time_col]);
        if (!t) {
            throw IoError("unparseable timestamp '" + std::string(fields[time_col]) + "' at line " +
                          std::to_string(line_no) + " of '" + path.string() + "'");
        }
        if (!records.empty() && *t < records.back().time) {
            throw InvalidInput("out-of-order timestamp at line " + std::to_string(line_no) +
                               " of '" + path.string() + "'");
        }
        Record rec;
        rec.time = *t;
        if (value_col < fields.size()) {
            auto v = parse_number(fields[value_col]);
            if (v && std::isfinite(*v) &&
                std::find(options.missing_values.begin(), options.missing_values.end(), *v) ==
                    options.missing_values.end()) {
                rec.value = v;
            }
        }
        if (flag_col) {
            rec.suspect = *flag_col >= fields.size() || fields[*flag_col] != options.good_flag;
        }
        if (rec.value && !rec.suspect) ++usable;
        records.push_back(rec);
    }
    if (usable == 0) {
        throw InsufficientData("'" + path.string() + "' contains no usable rows");
    }
    return records;
}

double native_spacing(const std::vector<Record>& records) {
    std::vector<double> diffs;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const double d = records[i].time - records[i - 1].time;
        if (d > 0.0) diffs.push_back(d);
    }
    if (diffs.empty()) return std::numeric_limits<double>::quiet_NaN();
    // Lower median, so a few gaps cannot make the record look coarser than it is.
    const auto mid = diffs.begin() + static_cast<std::ptrdiff_t>((diffs.size() - 1) / 2);
    std::nth_element(diffs.begin(), mid, diffs.end());
    return *mid;
}

TimeSeries regularize(const std::vector<Record>& records, double target_spacing, SpacingUnit unit) {
    if (records.empty()) throw InsufficientData("no records to regularize");
    if (!(target_spacing > 0.0) || !std::isfinite(target_spacing)) {
        throw InvalidInput("target spacing must be positive and finite");
    }
    const double native = native_spacing(records);
    if (std::isfinite(native) && target_spacing < native * (1.0 - 1e-9)) {
        throw InvalidInput("target spacing " + std::to_string(target_spacing) +
                           " is finer than the native record spacing " + std::to_string(native));
    }
    const double origin = records.front().time;
    const double span = (records.back().time - origin) / target_spacing;
    const auto cells = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;

    constexpr double kNone = std::numeric_limits<double>::infinity();
    std::vector<double> values(cells, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> best_offset(cells, kNone);
    std::vector<bool> saw_suspect(cells, false);
    for (const auto& rec : records) {
        const double pos = (rec.time - origin) / target_spacing;
        const auto cell = static_cast<std::size_t>(std::llround(pos));
        if (cell >= cells) continue;
        if (!rec.value) continue;
        if (rec.suspect) {
            saw_suspect[cell] = true;
            continue;
        }
        const double offset = std::abs(pos - static_cast<double>(cell));
        if (offset < best_offset[cell]) {
            best_offset[cell] = offset;
            values[cell] = *rec.value;
        }
    }
    TimeSeries out(std::move(values), target_spacing, unit, origin);
    out.quality.assign(cells, Quality::Good);
    for (std::size_t c = 0; c < cells; ++c) {
        if (best_offset[c] == kNone && saw_suspect[c]) out.quality[c] = Quality::Suspect;
    }
    return out;
}

std::pair<TimeSeries, CleaningReport> fill_gaps(const TimeSeries& series) {
    series.validate_metadata();
    TimeSeries out = series;
    if (out.quality.empty()) out.quality.assign(out.size(), Quality::Good);
    CleaningReport report;
    if (out.empty()) return {out, report};
    if (!std::isfinite(out.values.front())) {
        throw InvalidInput("series starts with a missing value and has no last good value to "
                           "carry forward; trim the leading gap before filling");
    }
    double last_good = out.values.front();
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (std::isfinite(out.values[i])) {
            last_good = out.values[i];
            continue;
        }
        out.values[i] = last_good;
        if (out.quality[i] == Quality::Suspect) {
            ++report.n_suspect_removed;
        } else {
            out.quality[i] = Quality::Filled;
            ++report.n_missing_filled;
        }
        if (!report.gap_spans.empty() && report.gap_spans.back().second + 1 == i) {
            report.gap_spans.back().second = i;
        } else {
            report.gap_spans.emplace_back(i, i);
        }
    }
    return {out, report};
}

PrefilterMethod parse_prefilter_method(std::string_view text) {
    if (text == "none") return PrefilterMethod::None;
    if (text == "moving_median" || text == "median") return PrefilterMethod::MovingMedian;
    throw InvalidInput("unknown prefilter '" + std::string(text) +
                       "' (expected none or moving_median)");
}

TimeSeries prefilter(const TimeSeries& series, PrefilterMethod method, std::size_t width) {
    if (method == PrefilterMethod::None) return series;
    if (width < 3 || width % 2 == 0) {
        throw InvalidInput("moving median width must be odd and >= 3, got " + std::to_string(width));
    }
    series.validate_clean();
    const std::size_t n = series.size();
    const std::size_t half = width / 2;
    TimeSeries out = series;
    std::vector<double> buf;
    buf.reserve(width);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t first = i >= half ? i - half : 0;
        const std::size_t last = std::min(n, i + half + 1);
        buf.assign(series.values.begin() + static_cast<std::ptrdiff_t>(first),
                   series.values.begin() + static_cast<std::ptrdiff_t>(last));
        const auto mid = buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2);
        std::nth_element(buf.begin(), mid, buf.end());
        double median = *mid;
        if (buf.size() % 2 == 0) {
            const double lower = *std::max_element(buf.begin(), mid);
            median = 0.5 * (lower + median);
        }
        out.values[i] = median;
    }
    return out;
}

}  // namespace pemix
