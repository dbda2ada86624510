#include "pemix/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "pemix/errors.hpp"

namespace pemix {

namespace {

constexpr std::string_view kSeriesTag = "pemix series v1";
constexpr std::string_view kTracesTag = "pemix pe-traces v1";
constexpr std::string_view kReversalTag = "pemix reversal v1";
constexpr std::string_view kSweepTag = "pemix binsweep v1";

void append_double(std::string& out, double v) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.append(buf.data(), ptr);
}

void append_uint(std::string& out, std::size_t v) {
    std::array<char, 24> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.append(buf.data(), ptr);
}

std::string header_block(std::string_view tag, const Metadata& meta) {
    std::string out = "# ";
    out += tag;
    out += '\n';
    for (const auto& [k, v] : meta.entries()) {
        out += "# ";
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

struct ParsedCsv {
    std::string tag;
    Metadata meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

double parse_cell(std::string_view s, const std::filesystem::path& path, std::size_t line_no) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s == "nan" || s == "-nan" || s == "NaN") return std::nan("");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw IoError("malformed number '" + std::string(s) + "' at line " +
                      std::to_string(line_no) + " of '" + path.string() + "'");
    }
    return v;
}

ParsedCsv read_pemix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    ParsedCsv csv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view body(line);
            body.remove_prefix(1);
            while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) {
                if (csv.tag.empty()) csv.tag = std::string(body);
            } else {
                csv.meta.set(std::string(body.substr(0, eq)), std::string(body.substr(eq + 1)));
            }
            continue;
        }
        std::vector<std::string_view> cells;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            cells.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (csv.columns.empty()) {
            for (auto c : cells) csv.columns.emplace_back(c);
            continue;
        }
        if (cells.size() != csv.columns.size()) {
            throw IoError("line " + std::to_string(line_no) + " of '" + path.string() + "' has " +
                          std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(csv.columns.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (auto c : cells) row.push_back(parse_cell(c, path, line_no));
        csv.rows.push_back(std::move(row));
    }
    if (csv.columns.empty()) throw IoError("'" + path.string() + "' has no column header");
    return csv;
}

double meta_double(const Metadata& meta, std::string_view key, double fallback) {
    const auto v = meta.get(key);
    if (!v) return fallback;
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || ptr != v->data() + v->size()) {
        throw IoError("metadata key '" + std::string(key) + "' is not a number: " + *v);
    }
    return out;
}

std::size_t to_index(double v, const std::filesystem::path& path) {
    if (!(v >= 0.0) || v != std::floor(v)) {
        throw IoError("'" + path.string() + "' holds a non-integer anchor or bin size");
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

void Metadata::set(std::string key, std::string value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries_.emplace_back(std::move(key), std::move(value));
}

void Metadata::set(std::string key, double value) { set(std::move(key), format_double(value)); }

void Metadata::set(std::string key, long long value) { set(std::move(key), std::to_string(value)); }

void Metadata::merge(const Metadata& other) {
    for (const auto& [k, v] : other.entries()) set(k, v);
}

std::optional<std::string> Metadata::get(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string format_double(double v) {
    std::string s;
    append_double(s, v);
    return s;
}

std::string format_spans(const std::vector<std::pair<std::size_t, std::size_t>>& spans) {
    std::string out;
    for (const auto& [a, b] : spans) {
        if (!out.empty()) out += ';';
        out += std::to_string(a) + "-" + std::to_string(b);
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_spans(std::string_view text) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    while (!text.empty()) {
        const auto semi = text.find(';');
        const auto item = text.substr(0, semi);
        const auto dash = item.find('-');
        std::size_t a = 0, b = 0;
        if (dash == std::string_view::npos ||
            std::from_chars(item.data(), item.data() + dash, a).ec != std::errc{} ||
            std::from_chars(item.data() + dash + 1, item.data() + item.size(), b).ec != std::errc{} ||
            b < a) {
            throw IoError("malformed index span '" + std::string(item) + "'");
        }
        out.emplace_back(a, b);
        if (semi == std::string_view::npos) break;
        text.remove_prefix(semi + 1);
    }
    return out;
}

Metadata cleaning_metadata(const CleaningReport& report) {
    Metadata m;
    m.set("n_missing_filled", report.n_missing_filled);
    m.set("n_suspect_removed", report.n_suspect_removed);
    m.set("gap_spans", format_spans(report.gap_spans));
    return m;
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series,
                      const Metadata& extra) {
    series.validate_metadata();
    Metadata meta;
    meta.set("n", series.size());
    meta.set("spacing", series.spacing);
    meta.set("unit", std::string(to_string(series.unit)));
    meta.set("origin", series.origin);
    if (!series.quality.empty()) {
        std::vector<std::pair<std::size_t, std::size_t>> filled, suspect;
        for (std::size_t i = 0; i < series.quality.size(); ++i) {
            auto* spans = series.quality[i] == Quality::Filled    ? &filled
                          : series.quality[i] == Quality::Suspect ? &suspect
                                                                  : nullptr;
            if (!spans) continue;
            if (!spans->empty() && spans->back().second + 1 == i) {
                spans->back().second = i;
            } else {
                spans->emplace_back(i, i);
            }
        }
        meta.set("quality_filled", format_spans(filled));
        meta.set("quality_suspect", format_spans(suspect));
    }
    meta.merge(extra);

    std::string out = header_block(kSeriesTag, meta);
    out += "time,value\n";
    out.reserve(out.size() + series.size() * 40);
    for (std::size_t i = 0; i < series.size(); ++i) {
        append_double(out, series.time_at(i));
        out += ',';
        append_double(out, series.values[i]);
        out += '\n';
    }
    write_file(path, out);
}

LoadedSeries read_series_csv(const std::filesystem::path& path) {
    auto csv = read_pemix_csv(path);
    if (csv.columns.size() != 2) {
        throw IoError("'" + path.string() + "' is not a two-column series file");
    }
    LoadedSeries out;
    auto& s = out.series;
    s.values.reserve(csv.rows.size());
    for (const auto& row : csv.rows) s.values.push_back(row[1]);
    const double inferred =
        csv.rows.size() >= 2 ? csv.rows[1][0] - csv.rows[0][0] : 1.0;
    s.spacing = meta_double(csv.meta, "spacing", inferred > 0.0 ? inferred : 1.0);
    s.origin = meta_double(csv.meta, "origin", csv.rows.empty() ? 0.0 : csv.rows[0][0]);
    if (const auto unit = csv.meta.get("unit")) s.unit = parse_spacing_unit(*unit);
    const auto filled = csv.meta.get("quality_filled");
    const auto suspect = csv.meta.get("quality_suspect");
    if (filled || suspect) {
        s.quality.assign(s.size(), Quality::Good);
        auto apply = [&](const std::optional<std::string>& text, Quality q) {
            if (!text) return;
            for (const auto& [a, b] : parse_spans(*text)) {
                if (b >= s.size()) throw IoError("quality span beyond end of '" + path.string() + "'");
                for (std::size_t i = a; i <= b; ++i) s.quality[i] = q;
            }
        };
        apply(filled, Quality::Filled);
        apply(suspect, Quality::Suspect);
    }
    s.validate_metadata();
    out.metadata = std::move(csv.meta);
    return out;
}

void write_traces_csv(const std::filesystem::path& path, const PETraceSet& traces,
                      const Metadata& extra) {
    traces.validate();
    Metadata meta;
    meta.set("tau_min", traces.tau_min);
    meta.set("tau_max", traces.tau_max);
    meta.merge(extra);
    std::string out = header_block(kTracesTag, meta);
    out += "anchor";
    for (const auto& t : traces.traces) out += ",pe_tau" + std::to_string(t.tau);
    out += '\n';
    const auto& anchors = traces.anchors();
    out.reserve(out.size() + anchors.size() * (10 + 22 * traces.traces.size()));
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        append_uint(out, anchors[i]);
        for (const auto& t : traces.traces) {
            out += ',';
            append_double(out, t.values[i]);
        }
        out += '\n';
    }
    write_file(path, out);
}

LoadedTraces read_traces_csv(const std::filesystem::path& path) {
    auto csv = read_pemix_csv(path);
    if (csv.columns.size() < 2 || csv.columns[0] != "anchor") {
        throw IoError("'" + path.string() + "' is not a PE trace file (expected anchor,pe_tau...)");
    }
    LoadedTraces out;
    auto& set = out.traces;
    for (std::size_t c = 1; c < csv.columns.size(); ++c) {
        const std::string& name = csv.columns[c];
        int tau = 0;
        if (name.rfind("pe_tau", 0) != 0 ||
            std::from_chars(name.data() + 6, name.data() + name.size(), tau).ec != std::errc{}) {
            throw IoError("'" + path.string() + "' has unexpected column '" + name + "'");
        }
        PETrace t;
        t.tau = tau;
        set.traces.push_back(std::move(t));
    }
    set.tau_min = set.traces.front().tau;
    set.tau_max = set.traces.back().tau;
    for (const auto& row : csv.rows) {
        const std::size_t anchor = to_index(row[0], path);
        for (std::size_t c = 1; c < row.size(); ++c) {
            set.traces[c - 1].anchors.push_back(anchor);
            set.traces[c - 1].values.push_back(row[c]);
        }
    }
    if (csv.rows.empty()) throw IoError("'" + path.string() + "' holds no trace rows");
    try {
        set.validate();
    } catch (const InvalidInput& e) {
        throw IoError("malformed trace file '" + path.string() + "': " + e.what());
    }
    out.metadata = std::move(csv.meta);
    return out;
}

void write_reversal_csv(const std::filesystem::path& path, const ReversalSeries& rev,
                        const Metadata& extra, std::string_view value_column) {
    Metadata meta;
    meta.set("r_bar", rev.r_bar);
    meta.set("n_anchors", rev.anchors.size());
    meta.merge(extra);
    std::string out = header_block(kReversalTag, meta);
    out += "anchor,";
    out += value_column;
    out += '\n';
    for (std::size_t i = 0; i < rev.anchors.size(); ++i) {
        append_uint(out, rev.anchors[i]);
        out += ',';
        append_double(out, rev.r_values[i]);
        out += '\n';
    }
    write_file(path, out);
}

void write_sweep_csv(const std::filesystem::path& path, const BinSweepResult& sweep,
                     const Metadata& extra) {
    Metadata meta;
    meta.set("recommended_j", sweep.recommended_j);
    meta.set("achieved_zero", sweep.achieved_zero);
    meta.merge(extra);
    std::string out = header_block(kSweepTag, meta);
    out += "j,r_bar,data_sufficient\n";
    for (std::size_t i = 0; i < sweep.bin_sizes.size(); ++i) {
        append_uint(out, sweep.bin_sizes[i]);
        out += ',';
        if (sweep.data_sufficient[i]) {
            append_double(out, sweep.r_bars[i]);
        } else {
            out += "nan";
        }
        out += sweep.data_sufficient[i] ? ",1\n" : ",0\n";
    }
    write_file(path, out);
}

}  // namespace pemix
