// Command-line front end: gen, decompose, verify, imfogram, spectrogram, pipeline.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "imfogram/pipeline.hpp"

namespace {

using imfogram::RunConfig;

void add_input_flags(CLI::App& cmd, RunConfig& c) {
    cmd.add_option("--input", c.input, "Input signal (CSV or WAV)");
    cmd.add_option("--rate", c.rate, "Sample rate in Hz for single-column CSV input");
}

void add_fif_flags(CLI::App& cmd, RunConfig& c, std::string& family, std::string& mode,
                   std::string& extension, std::string& strategy) {
    cmd.add_option("--delta", c.fif.delta, "Inner-loop stopping threshold")->capture_default_str();
    cmd.add_option("--chi", c.fif.chi, "Filter-length tuning parameter in [1.1, 2]")->capture_default_str();
    cmd.add_option("--max-imfs", c.fif.max_imfs, "Maximum number of IMFs")->capture_default_str();
    cmd.add_option("--max-iterations", c.fif.max_inner_iterations, "Inner-loop iteration cap")
        ->capture_default_str();
    cmd.add_option("--filter-family", family, "bump | triangular | rectangular")->capture_default_str();
    cmd.add_option("--filter-mode", mode, "double | raw")->capture_default_str();
    cmd.add_option("--extension", extension, "none | symmetric | periodic | antisymmetric")
        ->capture_default_str();
    cmd.add_option("--length-strategy", strategy, "extrema | peak | tuned")->capture_default_str();
}

void add_tfr_flags(CLI::App& cmd, RunConfig& c) {
    cmd.add_option("--window", c.window, "Window length J in samples (default n/128)");
    cmd.add_option("--hop", c.hop, "Hop H in samples (default J/2)");
    cmd.add_option("--freq-bins", c.freq_bins, "IMFogram frequency rows")->capture_default_str();
    cmd.add_option("--format", c.formats, "Outputs: csv, pgm, pgm16, db")->delimiter(',')->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    RunConfig config;
    config.threads = imfogram::threads_from_environment();
    std::string family = "bump";
    std::string mode = "double";
    std::string extension = "none";
    std::string strategy = "extrema";
    std::string input_format = "auto";

    CLI::App app{"Fast Iterative Filtering decomposition, L1 Fourier energy checks and IMFogram "
                 "time-frequency representation"};
    app.require_subcommand(1);
    app.add_option("--output-dir", config.output_dir, "Directory for output files")->capture_default_str();
    app.add_flag("--strict", config.strict, "Exit with status 3 when conservation is violated");

    std::map<std::string, CLI::App*> commands;
    commands["gen"] = app.add_subcommand("gen", "Write a synthetic test signal to signal.csv");
    commands["decompose"] = app.add_subcommand("decompose", "Decompose a signal into IMFs (imfs.csv)");
    commands["verify"] = app.add_subcommand("verify", "Check L1 Fourier energy conservation of a decomposition");
    commands["imfogram"] = app.add_subcommand("imfogram", "IMFogram of a decomposition CSV");
    commands["spectrogram"] = app.add_subcommand("spectrogram", "Rectangular-window spectrogram of a signal");
    commands["pipeline"] = app.add_subcommand("pipeline", "decompose -> verify -> imfogram");

    for (auto& [name, cmd] : commands) {
        cmd->add_option("--output-dir", config.output_dir, "Directory for output files");
        cmd->add_flag("--strict", config.strict, "Exit with status 3 when conservation is violated");
        cmd->add_option("--input-format", input_format, "auto | csv | wav");
    }

    auto* gen = commands["gen"];
    gen->add_option("--kind", config.generator, "chirp-pair | fast-chirp | noisy-triple | duffing")
        ->capture_default_str();
    gen->add_option("--samples", config.samples, "Number of samples")->capture_default_str();
    gen->add_option("--rate", config.gen_rate, "Sample rate in Hz")->capture_default_str();
    gen->add_option("--seed", config.seed, "Random seed (noisy-triple)")->capture_default_str();

    for (const char* name : {"decompose", "pipeline"}) {
        add_input_flags(*commands[name], config);
        add_fif_flags(*commands[name], config, family, mode, extension, strategy);
    }
    add_tfr_flags(*commands["pipeline"], config);

    add_input_flags(*commands["verify"], config);
    commands["verify"]->add_option("--components", config.components,
                                   "Decomposition CSV: time column then one column per component");
    for (const char* name : {"verify", "pipeline"}) {
        commands[name]->add_option("--tolerance", config.tolerance, "Relative conservation tolerance")
            ->capture_default_str();
    }

    commands["imfogram"]->add_option("--input", config.input, "Decomposition CSV (last column is the trend)");
    commands["imfogram"]->add_option("--rate", config.rate, "Override the sample rate");
    add_tfr_flags(*commands["imfogram"], config);

    add_input_flags(*commands["spectrogram"], config);
    add_tfr_flags(*commands["spectrogram"], config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return imfogram::kExitUsage;
    }

    for (auto& [name, cmd] : commands) {
        if (cmd->parsed()) {
            config.subcommand = name;
        }
    }

    try {
        config.fif.filter_family = imfogram::parse_filter_family(family);
        config.fif.filter_mode = imfogram::parse_filter_mode(mode);
        config.fif.extension = imfogram::parse_extension_mode(extension);
        config.fif.length_strategy = imfogram::parse_length_strategy(strategy);
        config.input_format = imfogram::io::parse_input_format(input_format);
    } catch (const imfogram::Error& e) {
        std::cerr << "error [config]: " << e.what() << '\n';
        return imfogram::kExitUsage;
    }

    try {
        return imfogram::run(config, std::cout, std::cerr);
    } catch (const imfogram::StageError& e) {
        std::cerr << "error [" << e.stage() << "]: " << e.what() << '\n';
        return e.validation() ? imfogram::kExitUsage : imfogram::kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return imfogram::kExitFailure;
    }
}
