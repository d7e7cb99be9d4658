#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imfogram/signal.hpp"

namespace imfogram {

enum class FilterFamily {
    Bump,        // exp(-1 / (1 - x^2)) on (-1, 1), the default
    Triangular,
    Rectangular, // test-only negative control; discontinuous at the ends
};

std::string_view to_string(FilterFamily family);
FilterFamily parse_filter_family(std::string_view name);

/// Compact, even, nonnegative, unit-mass tap sequence over [-l, l].
///
/// taps().size() == 2 * half_length() + 1 and the center tap sits at index
/// half_length(). Filters are only produced by the factory functions below
/// (or from_taps, which validates).
class Filter {
public:
    /// Validates symmetry, nonnegativity and unit mass (renormalizing
    /// round-off). Throws InvalidInput on an even-length or asymmetric
    /// tap sequence.
    static Filter from_taps(std::vector<double> taps, FilterFamily family,
                            bool is_double_convolution = false);

    [[nodiscard]] const std::vector<double>& taps() const noexcept { return taps_; }
    [[nodiscard]] std::size_t half_length() const noexcept { return taps_.size() / 2; }
    [[nodiscard]] std::size_t support() const noexcept { return taps_.size(); }
    [[nodiscard]] bool is_double_convolution() const noexcept { return double_convolution_; }
    [[nodiscard]] FilterFamily family() const noexcept { return family_; }

private:
    Filter(std::vector<double> taps, FilterFamily family, bool double_convolution)
        : taps_(std::move(taps)), family_(family), double_convolution_(double_convolution) {}

    std::vector<double> taps_;
    FilterFamily family_;
    bool double_convolution_;
};

/// Samples the family's continuous profile on the integer grid |j| <= l.
/// Requires l >= 2.
Filter make_base_filter(FilterFamily family, std::size_t half_length);

/// Same profile with a real-valued half width; the tap support is
/// ceil(half_width) on each side. Used when a filter zero has to land on a
/// frequency that integer lengths cannot hit. Requires half_width >= 2.
Filter make_base_filter(FilterFamily family, double half_width);

/// Discrete self-convolution, renormalized. Half length doubles.
Filter double_convolve(const Filter& filter);

/// DFT of the taps circularly centered on sample 0 of a length-n buffer.
/// The result is real (imaginary round-off dropped after symmetrizing
/// bins k and n-k). Throws DomainError when the support exceeds n.
std::vector<double> filter_dft_padded(const Filter& filter, std::size_t n);

/// Real-valued transfer function sum_j taps_j cos(2 pi f (j - l)) at
/// frequency f in cycles per sample.
double filter_response(const Filter& filter, double cycles_per_sample);

struct Extremum {
    double position; // sample index; plateau midpoint for flat extrema
    bool is_maximum;
};

/// Strict interior local maxima and minima in index order. A run of equal
/// values is one extremum at the run's midpoint; runs touching either end
/// of the sequence are never extrema.
std::vector<Extremum> find_extrema(std::span<const double> values);

/// Number of entries find_extrema reports.
std::size_t count_extrema(std::span<const double> values);
std::size_t count_extrema(const Signal& signal);

struct FilterLength {
    std::size_t half_length = 0;
    bool clamped = false; // formula gave < 2 and the result was raised to 2
};

/// l = 2 floor(chi * n / k), k the number of extrema. Returns nullopt when
/// the signal has fewer than 2 extrema (it is a trend).
std::optional<FilterLength> estimate_filter_length(std::span<const double> values, double chi);
std::optional<FilterLength> estimate_filter_length(const Signal& signal, double chi);

/// Highest-frequency significant peak of |DFT| above DC: the highest bin
/// that is a local maximum and reaches at least `relative_threshold` of the
/// largest modulus in (0, n/2]. Returns nullopt for a spectrum with no
/// energy above DC.
std::optional<std::size_t> highest_spectral_peak(std::span<const double> values,
                                                 double relative_threshold = 0.1);

/// l = round(chi * P) where P = n / peak_bin is the peak's period in samples.
std::optional<FilterLength> estimate_filter_length_from_peak(std::span<const double> values,
                                                             double chi);

/// Smallest positive frequency (cycles per sample) where the real transfer
/// function of `filter` changes sign. nullopt if none below Nyquist. A
/// double-convolution filter's response never changes sign; query its base.
std::optional<double> first_response_zero(const Filter& filter);

/// Base-profile half width whose first transfer zero sits at
/// `cycles_per_sample`. Double-convolving the resulting base filter puts a
/// double zero of the final response there. Bisection on the half width.
double tune_half_width(FilterFamily family, double cycles_per_sample);

/// Builds the filter FIF uses for a given half length: the double-convolved
/// base filter of half length l/2 (at least 2) or the base filter itself
/// when `double_convolution` is false.
Filter make_fif_filter(FilterFamily family, std::size_t half_length, bool double_convolution);

/// One tap per line, 17 significant digits.
std::string filter_to_csv(const Filter& filter);

} // namespace imfogram
