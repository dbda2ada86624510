#include <iostream>

#include <CLI11.hpp>

#include "pemix/cli.hpp"
#include "pemix/errors.hpp"

namespace pemix::cli {

namespace {

void add_pe_options(CLI::App* app, PEConfig& c) {
    app->add_option("--ell", c.ell, "Ordinal pattern length")->capture_default_str();
    app->add_option("--window", c.window, "Observations per PE window")->capture_default_str();
    app->add_option("--tau-min", c.tau_min, "Smallest stride")->capture_default_str();
    app->add_option("--tau-max", c.tau_max, "Largest stride")->capture_default_str();
    app->add_option("--hop", c.hop, "Anchor advance between windows")->capture_default_str();
}

HeaderPolicy parse_header_policy(const std::string& s) {
    if (s == "auto") return HeaderPolicy::Auto;
    if (s == "present") return HeaderPolicy::Present;
    if (s == "absent") return HeaderPolicy::Absent;
    throw InvalidInput("header policy must be auto, present or absent");
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Local-mixing diagnostics from multi-stride permutation entropy"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // generate
    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Generate a synthetic test signal");
    generate->require_subcommand(1);
    auto* g_lorenz = generate->add_subcommand("lorenz", "Lorenz x coordinate, fixed-step RK4");
    g_lorenz->add_option("--a", gen.lorenz.a)->capture_default_str();
    g_lorenz->add_option("--b", gen.lorenz.b)->capture_default_str();
    g_lorenz->add_option("--r", gen.lorenz.r)->capture_default_str();
    g_lorenz->add_option("--x0", gen.lorenz.initial[0])->capture_default_str();
    g_lorenz->add_option("--y0", gen.lorenz.initial[1])->capture_default_str();
    g_lorenz->add_option("--z0", gen.lorenz.initial[2])->capture_default_str();
    g_lorenz->add_option("--step-size", gen.lorenz.h, "Step size")->capture_default_str();
    g_lorenz->add_option("--steps", gen.lorenz.steps)->capture_default_str();
    g_lorenz->add_option("--skip", gen.lorenz.skip, "Leading samples to drop")->capture_default_str();
    g_lorenz->add_option("-o,--out", gen.out, "Output series CSV");
    auto* g_mg = generate->add_subcommand("mackey-glass", "Mackey-Glass delay system, RK4");
    g_mg->add_option("--beta", gen.mackey_glass.beta)->capture_default_str();
    g_mg->add_option("--gamma", gen.mackey_glass.gamma)->capture_default_str();
    g_mg->add_option("--q", gen.mackey_glass.q)->capture_default_str();
    g_mg->add_option("--t0", gen.mackey_glass.t0, "Delay")->capture_default_str();
    g_mg->add_option("--x0", gen.mackey_glass.x0, "Initial level and pre-history")->capture_default_str();
    g_mg->add_option("--step-size", gen.mackey_glass.h, "Step size")->capture_default_str();
    g_mg->add_option("--steps", gen.mackey_glass.steps)->capture_default_str();
    g_mg->add_option("--skip", gen.mackey_glass.skip, "Leading samples to drop")->capture_default_str();
    g_mg->add_option("-o,--out", gen.out, "Output series CSV");
    auto* g_sine = generate->add_subcommand("sine", "Sampled sine wave");
    g_sine->add_option("--amplitude", gen.amplitude)->capture_default_str();
    g_sine->add_option("--period", gen.period, "Samples per period")->capture_default_str();
    g_sine->add_option("--n", gen.n, "Number of samples")->capture_default_str();
    g_sine->add_option("-o,--out", gen.out, "Output series CSV");

    // ansatz
    AnsatzOptions ans;
    auto* ansatz = app.add_subcommand("ansatz", "Synthesize a locally mixed copy of a series");
    ansatz->add_option("-i,--in", ans.in, "Input series CSV")->required();
    ansatz->add_option("-k,--k", ans.k, "Mixing half-width (window 2k+1)")->capture_default_str();
    ansatz->add_option("--seed", ans.seed)->capture_default_str();
    ansatz->add_option("-o,--out", ans.out, "Output series CSV");

    // pe
    PeOptions pe;
    auto* pe_cmd = app.add_subcommand("pe", "Sliding-window PE traces for a range of strides");
    pe_cmd->add_option("-i,--in", pe.in, "Input series CSV")->required();
    add_pe_options(pe_cmd, pe.config);
    pe_cmd->add_option("-o,--out", pe.out, "Output trace CSV");

    // reversal
    ReversalOptions rev;
    std::size_t rev_window = 0;
    auto* reversal = app.add_subcommand("reversal", "Reversal metric R per anchor and overall R-bar");
    reversal->add_option("-i,--in", rev.in, "PE trace CSV")->required();
    auto* rev_window_opt =
        reversal->add_option("--window", rev_window, "Sliding R-bar window in anchors");
    reversal->add_option("--hop", rev.hop, "Sliding R-bar hop")->capture_default_str();
    reversal->add_option("-o,--out", rev.out, "Output CSV");

    // binsweep
    BinSweepOptions sweep;
    auto* binsweep = app.add_subcommand("binsweep", "R-bar versus bin size, with recommended scale");
    binsweep->add_option("-i,--in", sweep.in, "Input series CSV")->required();
    binsweep->add_option("--j-min", sweep.j_min)->capture_default_str();
    binsweep->add_option("--j-max", sweep.j_max)->capture_default_str();
    add_pe_options(binsweep, sweep.config);
    binsweep->add_option("-o,--out", sweep.out, "Output sweep CSV");

    // bin
    BinOptions bin;
    auto* bin_cmd = app.add_subcommand("bin", "Non-rolling bin average");
    bin_cmd->add_option("-i,--in", bin.in, "Input series CSV")->required();
    bin_cmd->add_option("-j,--j", bin.j, "Bin size")->required();
    bin_cmd->add_option("-o,--out", bin.out, "Output series CSV");

    // ingest
    IngestOptions ing;
    std::string header = "auto";
    std::string delimiter;
    std::string prefilter_name = "none";
    std::string unit_name = "seconds";
    std::string flag_column;
    auto* ingest = app.add_subcommand("ingest", "Load, regularize and clean a measured series");
    ingest->add_option("-i,--in", ing.in, "Delimited text file")->required();
    ingest->add_option("--time-col", ing.csv.time_column, "Time column name or 0-based index")
        ->capture_default_str();
    ingest->add_option("--value-col", ing.csv.value_column, "Value column name or 0-based index")
        ->capture_default_str();
    ingest->add_option("--header", header, "auto | present | absent")->capture_default_str();
    ingest->add_option("--delimiter", delimiter, "',' or 'space'; detected when omitted");
    ingest->add_option("--missing", ing.csv.missing_values, "Numeric sentinel meaning missing");
    ingest->add_option("--flag-col", flag_column, "Quality flag column");
    ingest->add_option("--good-flag", ing.csv.good_flag, "Flag value of good rows")->capture_default_str();
    ingest->add_option("--spacing", ing.target_spacing, "Target grid spacing (default: native)");
    ingest->add_option("--unit", unit_name, "samples | seconds | meters")->capture_default_str();
    ingest->add_option("--prefilter", prefilter_name, "none | moving_median")->capture_default_str();
    ingest->add_option("--width", ing.prefilter_width, "Moving median width")->capture_default_str();
    ingest->add_option("-o,--out", ing.out, "Output series CSV");

    // reproduce
    ReproduceOptions rep;
    std::size_t rep_steps = 0;
    auto* reproduce = app.add_subcommand("reproduce", "Run a synthetic experiment end to end");
    reproduce->add_option("figure", rep.figure, "fig2 | fig5 | fig6")->required();
    reproduce->add_option("-o,--outdir", rep.outdir, "Directory for all artifacts");
    auto* rep_steps_opt = reproduce->add_option("--steps", rep_steps, "Override generator steps");
    reproduce->add_option("--seed", rep.seed)->capture_default_str();
    add_pe_options(reproduce, rep.config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        nlohmann::json summary;
        if (generate->parsed()) {
            gen.system = g_lorenz->parsed() ? "lorenz" : g_mg->parsed() ? "mackey-glass" : "sine";
            summary = cmd_generate(gen);
        } else if (ansatz->parsed()) {
            summary = cmd_ansatz(ans);
        } else if (pe_cmd->parsed()) {
            summary = cmd_pe(pe);
        } else if (reversal->parsed()) {
            if (rev_window_opt->count() > 0) rev.window = rev_window;
            summary = cmd_reversal(rev);
        } else if (binsweep->parsed()) {
            summary = cmd_binsweep(sweep);
        } else if (bin_cmd->parsed()) {
            summary = cmd_bin(bin);
        } else if (ingest->parsed()) {
            ing.csv.header = parse_header_policy(header);
            if (!delimiter.empty()) {
                ing.csv.delimiter = delimiter == "space" || delimiter == " " ? ' ' : delimiter.front();
            }
            if (!flag_column.empty()) ing.csv.flag_column = flag_column;
            ing.prefilter = parse_prefilter_method(prefilter_name);
            ing.unit = parse_spacing_unit(unit_name);
            summary = cmd_ingest(ing);
        } else if (reproduce->parsed()) {
            if (rep_steps_opt->count() > 0) rep.steps = rep_steps;
            summary = cmd_reproduce(rep);
        }
        std::cout << summary.dump(2) << '\n';
        return kExitOk;
    } catch (const InvalidInput& e) {
        std::cerr << "pemix: invalid input: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const InsufficientData& e) {
        std::cerr << "pemix: insufficient data: " << e.what() << '\n';
        return kExitInsufficientData;
    } catch (const IoError& e) {
        std::cerr << "pemix: i/o error: " << e.what() << '\n';
        return kExitIoError;
    } catch (const std::exception& e) {
        std::cerr << "pemix: error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace pemix::cli
