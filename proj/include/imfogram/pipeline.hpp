#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "imfogram/error.hpp"
#include "imfogram/fif.hpp"
#include "imfogram/io.hpp"

namespace imfogram {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitUsage = 2,
    kExitConservation = 3,
};

/// Error raised inside a pipeline stage; what() starts with the stage name.
class StageError : public Error {
public:
    StageError(std::string stage, const std::exception& cause, bool validation);
    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }
    [[nodiscard]] bool validation() const noexcept { return validation_; }

private:
    std::string stage_;
    bool validation_;
};

struct RunConfig {
    std::string subcommand = "pipeline"; // gen | decompose | verify | imfogram | spectrogram | pipeline
    std::filesystem::path input;
    std::filesystem::path components; // verify: decomposition CSV
    std::filesystem::path output_dir = ".";
    io::InputFormat input_format = io::InputFormat::Auto;
    std::optional<double> rate;

    FifConfig fif;

    std::size_t window = 0;    // J; 0 picks a default from the signal length
    std::size_t hop = 0;       // H; 0 means J / 2
    std::size_t freq_bins = 256;
    std::vector<std::string> formats{"csv", "pgm"}; // csv, pgm, pgm16, db
    bool strict = false;
    unsigned threads = 1;
    double tolerance = 1e-10;

    // gen
    std::string generator = "chirp-pair"; // chirp-pair | noisy-triple | duffing | fast-chirp
    std::size_t samples = 2000;
    double gen_rate = 2000.0;
    std::uint64_t seed = 0;

    /// Range checks with messages naming the offending flag.
    void validate() const;
};

/// Runs one subcommand. Human-readable progress goes to `log`, the
/// conservation summary line to `out`. Returns the process exit status;
/// stage failures throw StageError.
int run(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Threads allowed by IMFOGRAM_THREADS (unset or invalid -> 1).
unsigned threads_from_environment();

} // namespace imfogram
