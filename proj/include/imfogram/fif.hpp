#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "imfogram/filters.hpp"
#include "imfogram/signal.hpp"

namespace imfogram {

enum class ExtensionMode {
    None,          // circular convolution on the signal as given
    Symmetric,     // whole-sample mirror: (1,2,3) -> (3,2,1,2,3,2,1)
    Periodic,
    Antisymmetric, // point reflection through the end samples
};

enum class FilterMode {
    DoubleConvolution,
    Raw, // base filter used directly; the negative control for conservation
};

enum class LengthStrategy {
    Extrema,      // l = 2 floor(chi n / k)
    SpectralPeak, // l = round(chi * period of the highest spectral peak)
    TunedZero,    // first zero of the filter response placed on the highest peak
};

enum class StopReason {
    NoExtrema,           // remainder has fewer than 2 extrema
    MaxImfs,             // max_imfs reached with an oscillating remainder
    FilterExceedsSignal, // the next filter would not fit the working length
};

std::string_view to_string(ExtensionMode mode);
std::string_view to_string(FilterMode mode);
std::string_view to_string(LengthStrategy strategy);
std::string_view to_string(StopReason reason);
ExtensionMode parse_extension_mode(std::string_view name);
FilterMode parse_filter_mode(std::string_view name);
LengthStrategy parse_length_strategy(std::string_view name);

struct FifConfig {
    double delta = 1e-3;
    double chi = 1.6;
    std::size_t max_imfs = 50;
    std::size_t max_inner_iterations = 200;
    ExtensionMode extension = ExtensionMode::None;
    FilterFamily filter_family = FilterFamily::Bump;
    FilterMode filter_mode = FilterMode::DoubleConvolution;
    LengthStrategy length_strategy = LengthStrategy::Extrema;

    /// Throws InvalidInput naming the offending field.
    void validate() const;
};

/// What happened while extracting one IMF.
struct ImfMeta {
    std::size_t filter_length = 0; // half length of the filter actually applied
    std::size_t iterations = 0;    // p: the IMF is V_w^p applied to the remainder
    FilterFamily family = FilterFamily::Bump;
    bool double_convolution = true;
    bool reached_max_iterations = false;
    bool length_clamped = false;
    std::size_t pad = 0;           // extension samples on each side
    double start_norm = 0.0;       // normalized 2-norm of the working remainder
    // diff_norms[p] = ||V^{p+1} s - V^p s||, p = 0 .. iterations - 1
    std::vector<double> diff_norms;
    // Per-bin (1 - w_hat)^p on the signal's own DFT grid. Only recorded when
    // no extension is applied; otherwise empty.
    std::vector<double> multiplier;
};

/// IMFs ordered from highest to lowest frequency plus the final remainder.
struct ImfSet {
    std::vector<Signal> imfs;
    Signal trend;
    std::vector<ImfMeta> meta; // empty for decompositions read from outside
    StopReason stop_reason = StopReason::NoExtrema;
    FifConfig config;

    [[nodiscard]] bool has_run_metadata() const noexcept { return meta.size() == imfs.size() && !imfs.empty(); }
};

/// Pads both ends with pad_samples samples. Reflection modes need
/// pad_samples < n.
Signal extend_signal(const Signal& signal, std::size_t pad_samples, ExtensionMode mode);

/// Circular convolution with the filter, w * s.
Signal moving_average(const Signal& signal, const Filter& filter);

/// s - w * s.
Signal variation(const Signal& signal, const Filter& filter);

struct ImfExtraction {
    Signal imf;
    ImfMeta meta;
};

/// Inner loop: multiplies the spectrum by (1 - w_hat) until the normalized
/// 2-norm of consecutive iterates differs by at most delta * ||s|| or
/// max_iter passes were made. Every norm is evaluated in the frequency domain.
///
/// A non-double-convolution filter is rejected unless `mode` is Raw.
ImfExtraction extract_imf(const Signal& signal, const Filter& filter, double delta,
                          std::size_t max_iter, FilterMode mode = FilterMode::DoubleConvolution);

/// Fast Iterative Filtering. Requires n >= 4.
ImfSet decompose(const Signal& signal, const FifConfig& config = {});

/// Sum of all IMFs and the trend.
Signal reconstruct(const ImfSet& imf_set);

/// Filter FIF would build for the given remainder under `config`, or
/// nullopt when the remainder is a trend for that strategy.
struct FilterChoice {
    Filter filter;
    bool clamped = false;
};
std::optional<FilterChoice> choose_filter(std::span<const double> remainder, const FifConfig& config);

} // namespace imfogram
