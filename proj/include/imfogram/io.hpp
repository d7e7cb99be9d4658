#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imfogram/fif.hpp"
#include "imfogram/signal.hpp"

namespace imfogram::io {

/// Numeric CSV content: '#' comment lines and one optional non-numeric
/// header row are skipped.
struct Table {
    std::vector<std::string> header;
    std::vector<std::string> comments; // comment lines without the leading '#'
    std::vector<std::vector<double>> columns;

    [[nodiscard]] std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
};

Table parse_csv(std::string_view text);
Table read_csv(const std::filesystem::path& path);

enum class InputFormat { Auto, Csv, Wav };
InputFormat parse_input_format(std::string_view name);

/// Maximum relative deviation of successive time steps from the mean step.
inline constexpr double kMaxTimeJitter = 1e-9;

/// One column (values, needs `rate`) or two columns (time, value) with a
/// uniform time grid. Extra columns are rejected.
Signal signal_from_table(const Table& table, std::optional<double> rate);

/// PCM 16/24/32-bit or 32-bit float; the first channel is kept and PCM is
/// scaled by 2^-(bits-1).
Signal parse_wav(std::string_view bytes);

Signal ingest(const std::filesystem::path& path, InputFormat format = InputFormat::Auto,
              std::optional<double> rate = std::nullopt);

/// Decimal with 17 significant digits.
std::string format_number(double value);

/// time,value
std::string signal_to_csv(const Signal& signal);

/// Comment header with run metadata, then time, imf_1..imf_m, trend.
std::string imf_set_to_csv(const ImfSet& imf_set);

/// Reads a decomposition table: column 0 time, then components; the last
/// component is taken as the trend. The result carries no run metadata.
ImfSet imf_set_from_table(const Table& table, std::optional<double> rate = std::nullopt);

/// Components of an arbitrary decomposition: column 0 time, the rest are
/// components in any order.
std::vector<Signal> components_from_table(const Table& table, std::optional<double> rate = std::nullopt);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

} // namespace imfogram::io
