#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "imfogram/fif.hpp"
#include "imfogram/signal.hpp"

namespace imfogram {

/// A per-sample track plus a flag raised when the input was degenerate
/// (no interior maximum for amplitude, fewer than two zero crossings for
/// frequency) and a fallback was returned.
struct Track {
    std::vector<double> values;
    bool degenerate = false;
};

/// Envelope through the local maxima of |imf| (held constant beyond the
/// first and last maximum), floored pointwise by |imf| itself. Each single
/// sample maximum is refined to the peak of the sinusoid through it and its
/// two neighbours.
Track instantaneous_amplitude(const Signal& imf);

/// Zero-crossing frequency in Hz. Crossings come from the local cubic
/// interpolant of the samples around each sign change; the half-period gap
/// to the next crossing gives 1 / (2 * gap) at each crossing, linearly
/// interpolated in between and held constant outside the first and last
/// crossing.
Track instantaneous_frequency(const Signal& imf);

/// Averaging windows of J samples placed every H samples. The last window
/// is clipped to the signal end when the grid does not tile it.
struct AveragingWindows {
    std::size_t window_length = 1; // J
    std::size_t hop = 1;           // H; H == J gives non-overlapping windows

    void validate(std::size_t n) const;
    [[nodiscard]] std::size_t count(std::size_t n) const;
    /// [first, last) sample range of window r.
    [[nodiscard]] std::pair<std::size_t, std::size_t> range(std::size_t r, std::size_t n) const;
};

/// Mean of the track over each window.
std::vector<double> local_average(std::span<const double> track, const AveragingWindows& windows);

/// Frequency-by-time amplitude matrix. Row i, column j lives at
/// values[i * cols + j]; row 0 is the lowest frequency.
struct TfrMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    std::vector<double> freq_axis; // Hz, bin centers
    std::vector<double> time_axis; // s, window centers
    std::size_t window_length = 0;
    std::size_t hop = 0;
    std::size_t clamped_above_nyquist = 0; // imfogram only

    [[nodiscard]] double at(std::size_t row, std::size_t col) const { return values[row * cols + col]; }
    double& at(std::size_t row, std::size_t col) { return values[row * cols + col]; }
};

/// IMFogram over the IMFs (the trend is not accumulated). Rows are
/// n_freq_bins centers evenly spaced from 0 to sample_rate / 2; each local
/// frequency goes to the nearest center, ties toward the lower one.
/// `threads` > 1 computes the per-IMF tracks concurrently; the result does
/// not depend on it.
TfrMatrix imfogram(std::span<const Signal> imfs, const AveragingWindows& windows,
                   std::size_t n_freq_bins, unsigned threads = 1);
TfrMatrix imfogram(const ImfSet& imf_set, const AveragingWindows& windows, std::size_t n_freq_bins,
                   unsigned threads = 1);

/// IMFogram built window by window: every full non-overlapping window of
/// `window_samples` samples is decomposed on its own and contributes one
/// column (one averaging window per column). For signals that are
/// stationary inside each window this is the construction whose Hadamard
/// square approaches the spectrogram with the same windows as delta -> 0.
struct PiecewiseImfogram {
    TfrMatrix matrix;
    std::vector<ImfSet> decompositions; // one per column
};
PiecewiseImfogram piecewise_imfogram(const Signal& signal, std::size_t window_samples,
                                     std::size_t n_freq_bins, const FifConfig& config = {},
                                     unsigned threads = 1);

/// Rectangular-window spectrogram over full windows only. Column values are
/// one-sided amplitudes 2|X_k|/J (DC and Nyquist not doubled), k = 0..J/2.
TfrMatrix spectrogram(const Signal& signal, std::size_t window_samples, std::size_t hop_samples);

/// spectrogram(signal, n, n).
TfrMatrix periodogram(const Signal& signal);

TfrMatrix hadamard_square(const TfrMatrix& matrix);

/// ||a - b||_F / ||b||_F. Shapes and axes must agree.
double compare_tfr(const TfrMatrix& a, const TfrMatrix& b);

/// Same metric restricted to the given flat cell indices (row * cols + col).
double compare_tfr(const TfrMatrix& a, const TfrMatrix& b, std::span<const std::size_t> cells);

/// First row holds the time axis (after a corner label), first column the
/// frequency axis.
std::string tfr_to_csv(const TfrMatrix& matrix);

/// Same layout with values as 20 log10(v / max), floored at floor_db.
std::string tfr_to_db_csv(const TfrMatrix& matrix, double floor_db = -120.0);

/// Binary PGM (P5), 8 or 16 bits, row 0 = highest frequency, values mapped
/// linearly from [0, max] with rounding to nearest.
std::string tfr_to_pgm(const TfrMatrix& matrix, int bits = 8);

} // namespace imfogram
