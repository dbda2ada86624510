#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "pemix/cli.hpp"
#include "pemix/errors.hpp"
#include "pemix/io.hpp"
#include "pemix/mixing.hpp"
#include "pemix/reversal.hpp"

namespace pemix::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

fs::path output_or_default(const fs::path& out, const std::string& name) {
    return out.empty() ? default_output(name) : out;
}

/// Flattens scalar parameters into the CSV metadata block; strings are unquoted.
Metadata metadata_from(const RunManifest& m) {
    Metadata meta;
    meta.set("command", m.command);
    meta.set("version", m.version);
    for (const auto& [k, v] : m.parameters.items()) {
        meta.set(k, v.is_string() ? v.get<std::string>() : v.dump());
    }
    if (m.seed) meta.set("seed", std::to_string(*m.seed));
    if (!m.input_digests.empty()) meta.set("input_sha256", m.input_digests.begin()->second);
    return meta;
}

json pe_params(const PEConfig& c) {
    return {{"ell", c.ell},
            {"window", c.window},
            {"tau_min", c.tau_min},
            {"tau_max", c.tau_max},
            {"hop", c.hop}};
}

LoadedSeries load_clean_series(const fs::path& in) {
    auto loaded = read_series_csv(in);
    loaded.series.validate_clean();
    return loaded;
}

std::size_t metadata_size(const Metadata& meta, std::string_view key, std::size_t fallback) {
    const auto v = meta.get(key);
    if (!v) return fallback;
    try {
        return static_cast<std::size_t>(std::stoull(*v));
    } catch (const std::exception&) {
        return fallback;
    }
}

json mean_by_tau(const PETraceSet& set) {
    json out = json::object();
    for (const auto& t : set.traces) {
        double sum = 0.0;
        for (const double v : t.values) sum += v;
        out[std::to_string(t.tau)] = t.values.empty() ? 0.0 : sum / static_cast<double>(t.values.size());
    }
    return out;
}

json sweep_table(const BinSweepResult& sweep) {
    json rows = json::array();
    for (std::size_t i = 0; i < sweep.bin_sizes.size(); ++i) {
        rows.push_back({{"j", sweep.bin_sizes[i]},
                        {"r_bar", sweep.data_sufficient[i] ? json(sweep.r_bars[i]) : json(nullptr)},
                        {"data_sufficient", static_cast<bool>(sweep.data_sufficient[i])}});
    }
    return rows;
}

}  // namespace

json RunManifest::to_json() const {
    json j = {{"command", command},
              {"parameters", parameters},
              {"input_digests", input_digests},
              {"version", version},
              {"timestamp", timestamp}};
    j["seed"] = seed ? json(*seed) : json(nullptr);
    return j;
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for hashing");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw IoError("sha256 initialisation failed");
    }
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    std::string hex;
    hex.reserve(2 * len);
    constexpr char kHex[] = "0123456789abcdef";
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[md[i] >> 4];
        hex += kHex[md[i] & 0xF];
    }
    return hex;
}

fs::path manifest_path(const fs::path& out) {
    fs::path p = out;
    p += ".manifest.json";
    return p;
}

void write_manifest(const fs::path& out, RunManifest manifest) {
    if (manifest.timestamp.empty()) manifest.timestamp = utc_timestamp();
    std::ofstream f(manifest_path(out), std::ios::trunc);
    if (!f) throw IoError("cannot write manifest for '" + out.string() + "'");
    f << manifest.to_json().dump(2) << '\n';
}

fs::path default_output(const std::string& name) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
        return fs::path(dir) / name;
    }
    return fs::path(name);
}

json cmd_generate(const GenerateOptions& opts) {
    RunManifest m;
    m.command = "generate";
    TimeSeries series;
    if (opts.system == "lorenz") {
        const auto& p = opts.lorenz;
        series = lorenz_series(p);
        m.parameters = {{"system", "lorenz"}, {"a", p.a},   {"b", p.b},           {"r", p.r},
                        {"x0", p.initial[0]}, {"y0", p.initial[1]}, {"z0", p.initial[2]},
                        {"h", p.h},           {"steps", p.steps}, {"skip", p.skip}};
    } else if (opts.system == "mackey-glass") {
        const auto& p = opts.mackey_glass;
        series = mackey_glass_series(p);
        m.parameters = {{"system", "mackey-glass"}, {"beta", p.beta}, {"gamma", p.gamma},
                        {"q", p.q},                 {"t0", p.t0},     {"x0", p.x0},
                        {"h", p.h},                 {"steps", p.steps}, {"skip", p.skip}};
    } else if (opts.system == "sine") {
        series = sine_series(opts.amplitude, opts.period, opts.n);
        m.parameters = {{"system", "sine"},
                        {"amplitude", opts.amplitude},
                        {"period", opts.period},
                        {"n", opts.n}};
    } else {
        throw InvalidInput("unknown system '" + opts.system +
                           "' (expected lorenz, mackey-glass or sine)");
    }
    const auto out = output_or_default(opts.out, opts.system + ".csv");
    write_series_csv(out, series, metadata_from(m));
    write_manifest(out, m);
    return {{"command", "generate"}, {"system", opts.system}, {"out", out.string()}, {"n", series.size()}};
}

json cmd_ansatz(const AnsatzOptions& opts) {
    const auto loaded = load_clean_series(opts.in);
    RunManifest m;
    m.command = "ansatz";
    m.parameters = {{"k", opts.k}, {"rng", std::string(kAnsatzRngAlgorithm)}};
    m.seed = opts.seed;
    m.input_digests[opts.in.string()] = sha256_file(opts.in);

    const auto mixed = mixing_ansatz(loaded.series, {opts.k, opts.seed});
    const auto out = output_or_default(opts.out, "ansatz_k" + std::to_string(opts.k) + ".csv");
    write_series_csv(out, mixed, metadata_from(m));
    write_manifest(out, m);
    return {{"command", "ansatz"}, {"k", opts.k}, {"seed", opts.seed}, {"out", out.string()},
            {"n", mixed.size()}};
}

json cmd_pe(const PeOptions& opts) {
    const auto loaded = load_clean_series(opts.in);
    const auto& series = loaded.series;
    RunManifest m;
    m.command = "pe";
    m.parameters = pe_params(opts.config);
    m.parameters["spacing"] = series.spacing;
    m.parameters["unit"] = std::string(to_string(series.unit));
    m.parameters["origin"] = series.origin;
    // Traces of a binned series lag the raw record by bin size x PE window samples.
    const std::size_t bin = metadata_size(loaded.metadata, "bin_size", 1);
    m.parameters["bin_size"] = bin;
    m.parameters["anchor_offset_raw_samples"] = bin * opts.config.window;
    m.input_digests[opts.in.string()] = sha256_file(opts.in);

    const auto traces = multi_tau_pe(series, opts.config);
    const auto out = output_or_default(opts.out, "traces.csv");
    write_traces_csv(out, traces, metadata_from(m));
    write_manifest(out, m);
    return {{"command", "pe"},
            {"out", out.string()},
            {"n_anchors", traces.anchors().size()},
            {"mean_pe_by_tau", mean_by_tau(traces)}};
}

json cmd_reversal(const ReversalOptions& opts) {
    const auto loaded = read_traces_csv(opts.in);
    RunManifest m;
    m.command = "reversal";
    m.parameters = {{"tau_min", loaded.traces.tau_min}, {"tau_max", loaded.traces.tau_max}};
    if (opts.window) {
        m.parameters["window"] = *opts.window;
        m.parameters["hop"] = opts.hop;
    }
    m.input_digests[opts.in.string()] = sha256_file(opts.in);

    const auto rev = reversal_series(loaded.traces);
    std::size_t zeros = 0, ones = 0;
    for (const double r : rev.r_values) {
        zeros += r == 0.0 ? 1 : 0;
        ones += r == 1.0 ? 1 : 0;
    }
    const auto n = static_cast<double>(rev.r_values.size());
    json summary = {{"command", "reversal"},
                    {"r_bar", rev.r_bar},
                    {"n_anchors", rev.r_values.size()},
                    {"fraction_r_zero", static_cast<double>(zeros) / n},
                    {"fraction_r_one", static_cast<double>(ones) / n}};

    const auto out = output_or_default(opts.out, opts.window ? "rbar_windowed.csv" : "reversal.csv");
    auto meta = metadata_from(m);
    if (opts.window) {
        const auto win = windowed_rbar(rev, *opts.window, opts.hop);
        meta.set("r_bar_overall", rev.r_bar);
        write_reversal_csv(out, win, meta, "r_bar_window");
        const auto [lo, hi] = std::minmax_element(win.r_values.begin(), win.r_values.end());
        summary["windowed"] = {{"n", win.r_values.size()}, {"min", *lo}, {"max", *hi}};
    } else {
        write_reversal_csv(out, rev, meta);
    }
    write_manifest(out, m);
    summary["out"] = out.string();
    return summary;
}

json cmd_binsweep(const BinSweepOptions& opts) {
    const auto loaded = load_clean_series(opts.in);
    RunManifest m;
    m.command = "binsweep";
    m.parameters = pe_params(opts.config);
    m.parameters["j_min"] = opts.j_min;
    m.parameters["j_max"] = opts.j_max;
    m.input_digests[opts.in.string()] = sha256_file(opts.in);

    const auto sweep = bin_sweep(loaded.series, opts.j_min, opts.j_max, opts.config);
    const auto out = output_or_default(opts.out, "binsweep.csv");
    write_sweep_csv(out, sweep, metadata_from(m));
    write_manifest(out, m);
    return {{"command", "binsweep"},
            {"out", out.string()},
            {"recommended_j", sweep.recommended_j},
            {"achieved_zero", sweep.achieved_zero},
            {"sweep", sweep_table(sweep)}};
}

json cmd_bin(const BinOptions& opts) {
    const auto loaded = read_series_csv(opts.in);
    RunManifest m;
    m.command = "bin";
    // bin_size accumulates so repeated binning stays traceable to the raw record.
    const std::size_t prior = metadata_size(loaded.metadata, "bin_size", 1);
    m.parameters = {{"j", opts.j}, {"bin_size", prior * opts.j}};
    m.input_digests[opts.in.string()] = sha256_file(opts.in);

    const auto binned = bin_average(loaded.series, opts.j);
    const auto out = output_or_default(opts.out, "binned_j" + std::to_string(opts.j) + ".csv");
    write_series_csv(out, binned, metadata_from(m));
    write_manifest(out, m);
    return {{"command", "bin"}, {"j", opts.j}, {"out", out.string()}, {"n", binned.size()}};
}

json cmd_ingest(const IngestOptions& opts) {
    const auto records = load_csv(opts.in, opts.csv);
    const double native = native_spacing(records);
    const double spacing = opts.target_spacing > 0.0 ? opts.target_spacing : native;
    if (!(spacing > 0.0)) {
        throw InsufficientData("cannot infer a record spacing from '" + opts.in.string() +
                               "'; pass a target spacing");
    }
    const auto regular = regularize(records, spacing, opts.unit);
    auto [filled, report] = fill_gaps(regular);
    const auto cleaned = prefilter(filled, opts.prefilter, opts.prefilter_width);

    RunManifest m;
    m.command = "ingest";
    m.parameters = {{"time_column", opts.csv.time_column},
                    {"value_column", opts.csv.value_column},
                    {"target_spacing", spacing},
                    {"native_spacing", native},
                    {"fill", "last_good_value"},
                    {"prefilter", opts.prefilter == PrefilterMethod::None ? "none" : "moving_median"}};
    if (opts.prefilter != PrefilterMethod::None) m.parameters["prefilter_width"] = opts.prefilter_width;
    if (opts.csv.flag_column) {
        m.parameters["flag_column"] = *opts.csv.flag_column;
        m.parameters["good_flag"] = opts.csv.good_flag;
    }
    m.input_digests[opts.in.string()] = sha256_file(opts.in);

    const auto out = output_or_default(opts.out, "ingested.csv");
    auto meta = metadata_from(m);
    meta.merge(cleaning_metadata(report));
    write_series_csv(out, cleaned, meta);
    write_manifest(out, m);

    json report_json = {{"n_records", records.size()},
                        {"n_points", cleaned.size()},
                        {"n_missing_filled", report.n_missing_filled},
                        {"n_suspect_removed", report.n_suspect_removed},
                        {"gap_spans", report.gap_spans}};
    fs::path report_path = out;
    report_path += ".report.json";
    std::ofstream(report_path, std::ios::trunc) << report_json.dump(2) << '\n';
    return {{"command", "ingest"}, {"out", out.string()}, {"report", report_json}};
}

namespace {

// Acceptance tolerances used in the reproduce summaries.
constexpr double kNormalOrderMax = 0.02;
constexpr double kReversedMin = 0.98;

json check(double measured, double expected, bool pass) {
    return {{"measured", measured}, {"expected", expected}, {"pass", pass}};
}

double rbar_of(const fs::path& traces) {
    return reversal_series(read_traces_csv(traces).traces).r_bar;
}

struct Pipeline {
    fs::path dir;
    PEConfig config;
    std::uint64_t seed;

    fs::path file(const std::string& name) const { return dir / name; }

    double pe_and_reversal(const fs::path& series, const std::string& tag) const {
        const auto traces = file("traces_" + tag + ".csv");
        cmd_pe({series, config, traces});
        cmd_reversal({traces, std::nullopt, 1, file("reversal_" + tag + ".csv")});
        return rbar_of(traces);
    }
};

json reproduce_system(const Pipeline& p, const std::string& system, GenerateOptions gen,
                      std::size_t k, std::size_t j_max, bool full) {
    gen.system = system;
    gen.out = p.file(system + ".csv");
    cmd_generate(gen);

    const auto ansatz = p.file(system + "_ansatz_k" + std::to_string(k) + ".csv");
    cmd_ansatz({gen.out, k, p.seed, ansatz});

    const auto sweep_csv = p.file(system + "_binsweep.csv");
    const auto sweep = cmd_binsweep({ansatz, 1, j_max, p.config, sweep_csv});
    json out = {{"k", k},
                {"mixing_window", 2 * k + 1},
                {"recommended_j", sweep["recommended_j"]},
                {"achieved_zero", sweep["achieved_zero"]},
                {"sweep", sweep["sweep"]}};
    if (!full) return out;

    const double raw = p.pe_and_reversal(gen.out, system + "_raw");
    const double mixed = p.pe_and_reversal(ansatz, system + "_ansatz");
    const auto j = sweep["recommended_j"].get<std::size_t>();
    const auto binned = p.file(system + "_ansatz_k" + std::to_string(k) + "_bin" + std::to_string(j) + ".csv");
    cmd_bin({ansatz, j, binned});
    const double restored = p.pe_and_reversal(binned, system + "_binned");
    out["r_bar"] = {{"raw", check(raw, 0.0, raw <= kNormalOrderMax)},
                    {"ansatz", check(mixed, 1.0, mixed >= kReversedMin)},
                    {"binned", check(restored, 0.0, restored <= kNormalOrderMax)}};
    out["binned_j"] = j;
    return out;
}

}  // namespace

json cmd_reproduce(const ReproduceOptions& opts) {
    if (opts.figure != "fig2" && opts.figure != "fig5" && opts.figure != "fig6") {
        throw InvalidInput("unknown figure '" + opts.figure + "' (expected fig2, fig5 or fig6)");
    }
    const fs::path dir = opts.outdir.empty() ? default_output("reproduce_" + opts.figure) : opts.outdir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
    const Pipeline p{dir, opts.config, opts.seed};

    GenerateOptions lorenz;
    GenerateOptions mackey;
    if (opts.steps) {
        lorenz.lorenz.steps = *opts.steps;
        mackey.mackey_glass.steps = *opts.steps;
    }

    json summary = {{"figure", opts.figure}, {"seed", opts.seed}, {"outdir", dir.string()},
                    {"pe", pe_params(opts.config)}};
    if (opts.figure == "fig2") {
        auto res = reproduce_system(p, "lorenz", lorenz, 3, 10, true);
        // The published figure bins at j = 3; report it next to the sweep's choice.
        const auto ansatz = p.file("lorenz_ansatz_k3.csv");
        const auto bin3 = p.file("lorenz_ansatz_k3_bin3.csv");
        cmd_bin({ansatz, 3, bin3});
        res["r_bar_binned_j3"] = p.pe_and_reversal(bin3, "lorenz_binned_j3");
        summary["lorenz"] = res;
    } else if (opts.figure == "fig6") {
        summary["mackey_glass"] = reproduce_system(p, "mackey-glass", mackey, 4, 12, true);
    } else {
        summary["lorenz"] = reproduce_system(p, "lorenz", lorenz, 3, 10, false);
        summary["mackey_glass"] = reproduce_system(p, "mackey-glass", mackey, 4, 12, false);
    }
    std::ofstream(dir / "summary.json", std::ios::trunc) << summary.dump(2) << '\n';
    return summary;
}

}  // namespace pemix::cli
