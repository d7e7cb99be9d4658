#include "imfogram/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <utility>

#include "imfogram/error.hpp"
#include "imfogram/signals.hpp"
#include "imfogram/spectral.hpp"
#include "imfogram/tfr.hpp"
#include "imfogram/verify.hpp"

namespace imfogram {
namespace {

template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const InvalidInput& e) {
        throw StageError(name, e, true);
    } catch (const DomainError& e) {
        throw StageError(name, e, true);
    } catch (const std::exception& e) {
        throw StageError(name, e, false);
    }
}

bool wants(const RunConfig& c, const std::string& format) {
    return std::find(c.formats.begin(), c.formats.end(), format) != c.formats.end();
}

Signal load_signal(const RunConfig& c) {
    return stage("ingest", [&] { return io::ingest(c.input, c.input_format, c.rate); });
}

AveragingWindows windows_for(const RunConfig& c, std::size_t n) {
    AveragingWindows w;
    w.window_length = c.window != 0 ? c.window : std::clamp<std::size_t>(n / 128, 1, n);
    w.hop = c.hop != 0 ? c.hop : std::max<std::size_t>(1, w.window_length / 2);
    return w;
}

void write_tfr(const RunConfig& c, const TfrMatrix& m, const std::string& stem) {
    if (wants(c, "csv")) {
        io::write_file(c.output_dir / (stem + ".csv"), tfr_to_csv(m));
    }
    if (wants(c, "db")) {
        io::write_file(c.output_dir / (stem + "_db.csv"), tfr_to_db_csv(m));
    }
    if (wants(c, "pgm")) {
        io::write_file(c.output_dir / (stem + ".pgm"), tfr_to_pgm(m, 8));
    }
    if (wants(c, "pgm16")) {
        io::write_file(c.output_dir / (stem + "_16.pgm"), tfr_to_pgm(m, 16));
    }
}

void print_meta(const Signal& signal, const ImfSet& set, std::ostream& log) {
    const double total = spectral::l1_fourier_energy(signal);
    log << "imfs: " << set.imfs.size() << " (stop: " << to_string(set.stop_reason) << ")\n";
    log << "  k  filter_length  iterations  energy_share\n";
    for (std::size_t k = 0; k < set.imfs.size(); ++k) {
        const double share = total > 0.0 ? spectral::l1_fourier_energy(set.imfs[k]) / total : 0.0;
        const auto& m = set.meta[k];
        log << std::setw(3) << k + 1 << std::setw(15) << m.filter_length << std::setw(12) << m.iterations
            << (m.reached_max_iterations ? "*" : " ") << std::setw(13) << std::setprecision(6) << share
            << '\n';
    }
    const double trend_share = total > 0.0 ? spectral::l1_fourier_energy(set.trend) / total : 0.0;
    log << "  trend" << std::setw(34) << std::setprecision(6) << trend_share << '\n';
}

int report_conservation(const RunConfig& c, const ConservationReport& report, std::ostream& out,
                        std::ostream& log) {
    io::write_file(c.output_dir / "conservation.csv", report_to_csv(report));
    out << report_summary_json(report) << '\n';
    if (report.conserves()) {
        log << "conservation: OK (<=" << report.tolerance << ")\n";
        return kExitOk;
    }
    log << "conservation: " << report.violations.size() << " violating bin(s), relative error "
        << report.relative_error << '\n';
    return c.strict ? kExitConservation : kExitOk;
}

int run_gen(const RunConfig& c, std::ostream& log) {
    const Signal s = stage("gen", [&] {
        if (c.generator == "chirp-pair") {
            return signals::chirp_pair(c.samples, c.gen_rate);
        }
        if (c.generator == "fast-chirp") {
            return signals::fast_chirp(c.samples, c.gen_rate);
        }
        if (c.generator == "noisy-triple") {
            return signals::noisy_triple(c.samples, c.gen_rate, c.seed);
        }
        if (c.generator == "duffing") {
            return signals::duffing_velocity(c.samples, c.gen_rate);
        }
        throw InvalidInput("unknown generator '" + c.generator + "'");
    });
    stage("export", [&] { io::write_file(c.output_dir / "signal.csv", io::signal_to_csv(s)); });
    log << "wrote " << (c.output_dir / "signal.csv").string() << " (" << s.size() << " samples)\n";
    return kExitOk;
}

} // namespace

StageError::StageError(std::string stage, const std::exception& cause, bool validation)
    : Error(stage + ": " + cause.what()), stage_(std::move(stage)), validation_(validation) {}

void RunConfig::validate() const {
    static const std::vector<std::string> commands{"gen", "decompose", "verify", "imfogram", "spectrogram",
                                                   "pipeline"};
    if (std::find(commands.begin(), commands.end(), subcommand) == commands.end()) {
        throw InvalidInput("unknown subcommand '" + subcommand + "'");
    }
    if (subcommand != "gen" && input.empty()) {
        throw InvalidInput("--input is required for " + subcommand);
    }
    if (subcommand == "verify" && components.empty()) {
        throw InvalidInput("--components is required for verify");
    }
    if (rate && !(*rate > 0.0)) {
        throw InvalidInput("--rate must be positive");
    }
    if (!(fif.delta > 0.0)) {
        throw InvalidInput("--delta must be positive");
    }
    if (!(fif.chi >= 1.1 && fif.chi <= 2.0)) {
        throw InvalidInput("--chi must lie in [1.1, 2]");
    }
    if (fif.max_imfs < 1) {
        throw InvalidInput("--max-imfs must be at least 1");
    }
    if (fif.max_inner_iterations < 1) {
        throw InvalidInput("--max-iterations must be at least 1");
    }
    if (hop != 0 && window != 0 && hop > window) {
        throw InvalidInput("--hop must not exceed --window");
    }
    if (freq_bins < 2) {
        throw InvalidInput("--freq-bins must be at least 2");
    }
    for (const auto& f : formats) {
        if (f != "csv" && f != "pgm" && f != "pgm16" && f != "db") {
            throw InvalidInput("--format accepts csv, pgm, pgm16 or db, got '" + f + "'");
        }
    }
    if (!(tolerance >= 0.0)) {
        throw InvalidInput("--tolerance must be nonnegative");
    }
    if (subcommand == "gen" && (samples < 4 || !(gen_rate > 0.0))) {
        throw InvalidInput("--samples must be at least 4 and --rate positive");
    }
}

unsigned threads_from_environment() {
    const char* value = std::getenv("IMFOGRAM_THREADS");
    if (value == nullptr) {
        return 1;
    }
    char* end = nullptr;
    const long n = std::strtol(value, &end, 10);
    if (end == value || *end != '\0' || n < 1) {
        return 1;
    }
    return static_cast<unsigned>(std::min<long>(n, 256));
}

int run(const RunConfig& c, std::ostream& out, std::ostream& log) {
    stage("config", [&] { c.validate(); });
    stage("output", [&] { std::filesystem::create_directories(c.output_dir); });

    if (c.subcommand == "gen") {
        return run_gen(c, log);
    }

    if (c.subcommand == "verify") {
        const Signal s = load_signal(c);
        const auto parts = stage("ingest", [&] {
            return io::components_from_table(io::read_csv(c.components), s.sample_rate());
        });
        const auto report = stage("verify", [&] { return check_conservation(s, parts, c.tolerance); });
        return report_conservation(c, report, out, log);
    }

    if (c.subcommand == "imfogram") {
        const auto set = stage("ingest", [&] { return io::imf_set_from_table(io::read_csv(c.input), c.rate); });
        const auto m = stage("imfogram", [&] {
            if (set.imfs.empty()) {
                throw InvalidInput("decomposition holds no IMFs (only a trend)");
            }
            return imfogram(set, windows_for(c, set.trend.size()), c.freq_bins, c.threads);
        });
        stage("export", [&] { write_tfr(c, m, "imfogram"); });
        log << "imfogram: " << m.rows << " x " << m.cols << '\n';
        return kExitOk;
    }

    const Signal s = load_signal(c);

    if (c.subcommand == "spectrogram") {
        const auto m = stage("spectrogram", [&] {
            const auto w = windows_for(c, s.size());
            return spectrogram(s, w.window_length, w.hop);
        });
        stage("export", [&] { write_tfr(c, m, "spectrogram"); });
        log << "spectrogram: " << m.rows << " x " << m.cols << '\n';
        return kExitOk;
    }

    const ImfSet set = stage("decompose", [&] { return decompose(s, c.fif); });
    stage("export", [&] { io::write_file(c.output_dir / "imfs.csv", io::imf_set_to_csv(set)); });
    print_meta(s, set, log);
    if (c.subcommand == "decompose") {
        return kExitOk;
    }

    const auto report = stage("verify", [&] { return check_conservation(s, set, c.tolerance); });
    const int status = report_conservation(c, report, out, log);
    if (!set.imfs.empty()) {
        const auto m = stage("imfogram", [&] {
            return imfogram(set, windows_for(c, s.size()), c.freq_bins, c.threads);
        });
        stage("export", [&] { write_tfr(c, m, "imfogram"); });
        log << "imfogram: " << m.rows << " x " << m.cols << '\n';
    } else {
        log << "imfogram: skipped, no IMFs\n";
    }
    return status;
}

} // namespace imfogram
