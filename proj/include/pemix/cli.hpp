#pragma once

// Command implementations behind the `pemix` executable. Each command writes
// its output files plus a `<out>.manifest.json` sidecar and returns a JSON
// summary that the executable prints to stdout.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pemix/entropy.hpp"
#include "pemix/generators.hpp"
#include "pemix/ingest.hpp"

namespace pemix::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Output directory used when a command is not given an explicit path.
inline constexpr const char* kOutputDirEnv = "PEMIX_OUTPUT_DIR";

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitInvalidInput = 2,
    kExitInsufficientData = 3,
    kExitIoError = 4,
};

struct RunManifest {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::map<std::string, std::string> input_digests;  ///< path -> sha256 hex
    std::optional<std::uint64_t> seed;
    std::string version = kVersion;
    std::string timestamp;  ///< UTC, ISO-8601

    [[nodiscard]] nlohmann::json to_json() const;
};

std::string sha256_file(const std::filesystem::path& path);

/// `<out>.manifest.json`
std::filesystem::path manifest_path(const std::filesystem::path& out);
void write_manifest(const std::filesystem::path& out, RunManifest manifest);

/// `name` under $PEMIX_OUTPUT_DIR when set, else the working directory.
std::filesystem::path default_output(const std::string& name);

struct GenerateOptions {
    std::string system = "lorenz";  ///< lorenz | mackey-glass | sine
    LorenzParams lorenz;
    MackeyGlassParams mackey_glass;
    double amplitude = 1.0;
    std::size_t period = 200;
    std::size_t n = 10000;
    std::filesystem::path out;
};
nlohmann::json cmd_generate(const GenerateOptions& opts);

struct AnsatzOptions {
    std::filesystem::path in;
    std::size_t k = 3;
    std::uint64_t seed = 1;
    std::filesystem::path out;
};
nlohmann::json cmd_ansatz(const AnsatzOptions& opts);

struct PeOptions {
    std::filesystem::path in;
    PEConfig config;
    std::filesystem::path out;
};
nlohmann::json cmd_pe(const PeOptions& opts);

struct ReversalOptions {
    std::filesystem::path in;
    std::optional<std::size_t> window;
    std::size_t hop = 1;
    std::filesystem::path out;
};
nlohmann::json cmd_reversal(const ReversalOptions& opts);

struct BinSweepOptions {
    std::filesystem::path in;
    std::size_t j_min = 1;
    std::size_t j_max = 10;
    PEConfig config;
    std::filesystem::path out;
};
nlohmann::json cmd_binsweep(const BinSweepOptions& opts);

struct BinOptions {
    std::filesystem::path in;
    std::size_t j = 1;
    std::filesystem::path out;
};
nlohmann::json cmd_bin(const BinOptions& opts);

struct IngestOptions {
    std::filesystem::path in;
    CsvOptions csv;
    double target_spacing = 0.0;  ///< 0 keeps the native record spacing
    SpacingUnit unit = SpacingUnit::Seconds;
    PrefilterMethod prefilter = PrefilterMethod::None;
    std::size_t prefilter_width = 3;
    std::filesystem::path out;
};
nlohmann::json cmd_ingest(const IngestOptions& opts);

struct ReproduceOptions {
    std::string figure = "fig2";  ///< fig2 | fig5 | fig6
    std::filesystem::path outdir;
    std::optional<std::size_t> steps;  ///< overrides the generator's step count
    std::uint64_t seed = 1;
    PEConfig config;
};
nlohmann::json cmd_reproduce(const ReproduceOptions& opts);

/// Parses argv, dispatches, prints the summary, and maps errors to exit codes.
int run(int argc, char** argv);

}  // namespace pemix::cli
