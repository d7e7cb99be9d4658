#include "imfogram/tfr.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

#include "imfogram/error.hpp"
#include "imfogram/filters.hpp"
#include "imfogram/spectral.hpp"

namespace imfogram {
namespace {

// Linear interpolation through (x_i, y_i), x increasing, held constant
// outside [x_0, x_last], sampled at 0, 1, ..., n-1.
std::vector<double> interpolate_on_grid(std::span<const double> x, std::span<const double> y,
                                        std::size_t n) {
    std::vector<double> out(n);
    std::size_t seg = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(j);
        if (t <= x.front()) {
            out[j] = y.front();
            continue;
        }
        if (t >= x.back()) {
            out[j] = y.back();
            continue;
        }
        while (x[seg + 1] < t) {
            ++seg;
        }
        const double span = x[seg + 1] - x[seg];
        const double w = span > 0.0 ? (t - x[seg]) / span : 0.0;
        out[j] = y[seg] + w * (y[seg + 1] - y[seg]);
    }
    return out;
}

// Root in (0, 1) of the cubic through (-1, y0), (0, y1), (1, y2), (2, y3),
// where y1 and y2 have opposite signs.
double cubic_crossing(double y0, double y1, double y2, double y3) {
    const auto p = [&](double x) {
        return -y0 * x * (x - 1.0) * (x - 2.0) / 6.0 + y1 * (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0
               - y2 * (x + 1.0) * x * (x - 2.0) / 2.0 + y3 * (x + 1.0) * x * (x - 1.0) / 6.0;
    };
    double lo = 0.0;
    double hi = 1.0;
    const bool lo_positive = y1 > 0.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((p(mid) > 0.0) == lo_positive) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Zero crossings in sample units. A sign change between neighbouring samples
// is located on the local cubic interpolant (linear at the two ends); a run
// of exact zeros between opposite signs is one crossing at its middle.
std::vector<double> zero_crossings(std::span<const double> s) {
    std::vector<double> z;
    const std::size_t n = s.size();
    std::size_t last = n;
    for (std::size_t j = 0; j < n; ++j) {
        if (s[j] == 0.0) {
            continue;
        }
        if (last != n && (s[last] > 0.0) != (s[j] > 0.0)) {
            if (j == last + 1) {
                const double base = static_cast<double>(last);
                if (last >= 1 && j + 1 < n) {
                    z.push_back(base + cubic_crossing(s[last - 1], s[last], s[j], s[j + 1]));
                } else {
                    z.push_back(base + s[last] / (s[last] - s[j]));
                }
            } else {
                z.push_back(0.5 * static_cast<double>(last + 1 + j - 1));
            }
        }
        last = j;
    }
    return z;
}

void check_axes(const TfrMatrix& a, const TfrMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) {
        throw InvalidInput("time-frequency matrices differ in shape");
    }
    auto close = [](const std::vector<double>& u, const std::vector<double>& v) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (std::abs(u[i] - v[i]) > 1e-12 * std::max({1.0, std::abs(u[i]), std::abs(v[i])})) {
                return false;
            }
        }
        return u.size() == v.size();
    };
    if (!close(a.freq_axis, b.freq_axis) || !close(a.time_axis, b.time_axis)) {
        throw InvalidInput("time-frequency matrices differ in their axes");
    }
}

void write_axes_csv(std::ostringstream& out, const TfrMatrix& m,
                    const std::vector<double>& cells) {
    out << std::setprecision(17);
    out << "freq_hz\\time_s";
    for (double t : m.time_axis) {
        out << ',' << t;
    }
    out << '\n';
    for (std::size_t r = 0; r < m.rows; ++r) {
        out << m.freq_axis[r];
        for (std::size_t c = 0; c < m.cols; ++c) {
            out << ',' << cells[r * m.cols + c];
        }
        out << '\n';
    }
}

} // namespace

Track instantaneous_amplitude(const Signal& imf) {
    const std::size_t n = imf.size();
    std::vector<double> rectified(n);
    for (std::size_t j = 0; j < n; ++j) {
        rectified[j] = std::abs(imf[j]);
    }
    std::vector<double> knots_x;
    std::vector<double> knots_y;
    for (const auto& e : find_extrema(rectified)) {
        if (!e.is_maximum) {
            continue;
        }
        const auto j = static_cast<std::size_t>(e.position);
        double x = e.position;
        double y = rectified[j];
        // Peak of the sinusoid through the sample and its two neighbours,
        // kept when it lies within half a sample of the sample itself.
        if (static_cast<double>(j) == e.position && j >= 1 && j + 1 < n) {
            const double sign = imf[j] > 0.0 ? 1.0 : -1.0;
            const double a = sign * imf[j - 1];
            const double b = sign * imf[j];
            const double c = sign * imf[j + 1];
            const double cos_w = (a + c) / (2.0 * b);
            const double sin_w = std::sqrt(std::max(0.0, 1.0 - cos_w * cos_w));
            if (sin_w > 1e-6) {
                const double quadrature = (a - c) / (2.0 * sin_w);
                const double offset = std::atan2(quadrature, b) / std::acos(cos_w);
                if (std::abs(offset) <= 0.5) {
                    x += offset;
                    y = std::max(y, std::hypot(b, quadrature));
                }
            }
        }
        knots_x.push_back(x);
        knots_y.push_back(y);
    }
    if (knots_x.empty()) {
        const double peak = *std::max_element(rectified.begin(), rectified.end());
        return Track{std::vector<double>(n, peak), true};
    }
    auto envelope = interpolate_on_grid(knots_x, knots_y, n);
    for (std::size_t j = 0; j < n; ++j) {
        envelope[j] = std::max(envelope[j], rectified[j]);
    }
    return Track{std::move(envelope), false};
}

Track instantaneous_frequency(const Signal& imf) {
    const std::size_t n = imf.size();
    const auto z = zero_crossings(imf.samples());
    if (z.size() < 2) {
        return Track{std::vector<double>(n, 0.0), true};
    }
    const double rate = imf.sample_rate();
    std::vector<double> freq(z.size());
    // Two crossings closer than a sample apart would read above Nyquist.
    for (std::size_t j = 0; j + 1 < z.size(); ++j) {
        freq[j] = std::min(0.5 * rate, rate / (2.0 * (z[j + 1] - z[j])));
    }
    freq.back() = freq[freq.size() - 2];
    return Track{interpolate_on_grid(z, freq, n), false};
}

void AveragingWindows::validate(std::size_t n) const {
    if (window_length < 1) {
        throw InvalidInput("window length must be at least 1 sample");
    }
    if (window_length > n) {
        throw InvalidInput("window length (" + std::to_string(window_length) +
                           ") exceeds the signal length (" + std::to_string(n) + ")");
    }
    if (hop < 1 || hop > window_length) {
        throw InvalidInput("hop must lie in [1, window length]");
    }
}

std::size_t AveragingWindows::count(std::size_t n) const {
    if (n <= window_length) {
        return 1;
    }
    return 1 + (n - window_length + hop - 1) / hop;
}

std::pair<std::size_t, std::size_t> AveragingWindows::range(std::size_t r, std::size_t n) const {
    const std::size_t first = r * hop;
    return {first, std::min(n, first + window_length)};
}

std::vector<double> local_average(std::span<const double> track, const AveragingWindows& windows) {
    const std::size_t n = track.size();
    windows.validate(n);
    const std::size_t count = windows.count(n);
    std::vector<double> out(count);
    for (std::size_t r = 0; r < count; ++r) {
        const auto [first, last] = windows.range(r, n);
        double sum = 0.0;
        for (std::size_t j = first; j < last; ++j) {
            sum += track[j];
        }
        out[r] = sum / static_cast<double>(last - first);
    }
    return out;
}

TfrMatrix imfogram(std::span<const Signal> imfs, const AveragingWindows& windows,
                   std::size_t n_freq_bins, unsigned threads) {
    if (imfs.empty()) {
        throw InvalidInput("imfogram needs at least one IMF");
    }
    if (n_freq_bins < 2) {
        throw InvalidInput("imfogram needs at least 2 frequency bins");
    }
    const Signal& ref = imfs.front();
    const std::size_t n = ref.size();
    const double rate = ref.sample_rate();
    for (const auto& imf : imfs) {
        if (imf.size() != n || imf.sample_rate() != rate) {
            throw InvalidInput("all IMFs must share length and sample rate");
        }
    }
    windows.validate(n);

    struct Local {
        std::vector<double> amplitude;
        std::vector<double> frequency;
    };
    std::vector<Local> locals(imfs.size());
    auto work = [&](std::size_t k) {
        const auto ia = instantaneous_amplitude(imfs[k]);
        const auto fr = instantaneous_frequency(imfs[k]);
        locals[k] = Local{local_average(ia.values, windows), local_average(fr.values, windows)};
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(imfs.size())));
    if (workers == 1) {
        for (std::size_t k = 0; k < imfs.size(); ++k) {
            work(k);
        }
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t k = w; k < imfs.size(); k += workers) {
                    work(k);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    TfrMatrix m;
    m.rows = n_freq_bins;
    m.cols = windows.count(n);
    m.values.assign(m.rows * m.cols, 0.0);
    m.window_length = windows.window_length;
    m.hop = windows.hop;
    const double denom = 2.0 * static_cast<double>(n_freq_bins - 1);
    for (std::size_t i = 0; i < n_freq_bins; ++i) {
        m.freq_axis.push_back(static_cast<double>(i) * rate / denom);
    }
    for (std::size_t r = 0; r < m.cols; ++r) {
        const auto [first, last] = windows.range(r, n);
        m.time_axis.push_back(ref.t0() + (static_cast<double>(first) +
                                          0.5 * static_cast<double>(last - first - 1)) / rate);
    }
    const double bin_width = rate / denom;
    for (const auto& local : locals) {
        for (std::size_t r = 0; r < m.cols; ++r) {
            const double position = local.frequency[r] / bin_width;
            // nearest center, ties toward the lower bin
            auto row = static_cast<std::size_t>(std::max(0.0, std::ceil(position - 0.5)));
            if (row >= n_freq_bins) {
                row = n_freq_bins - 1;
                ++m.clamped_above_nyquist;
            }
            m.at(row, r) += local.amplitude[r];
        }
    }
    return m;
}

TfrMatrix imfogram(const ImfSet& imf_set, const AveragingWindows& windows, std::size_t n_freq_bins,
                   unsigned threads) {
    return imfogram(std::span<const Signal>(imf_set.imfs), windows, n_freq_bins, threads);
}

PiecewiseImfogram piecewise_imfogram(const Signal& signal, std::size_t window_samples,
                                     std::size_t n_freq_bins, const FifConfig& config, unsigned threads) {
    const std::size_t n = signal.size();
    const std::size_t J = window_samples;
    if (J < 4 || J > n) {
        throw InvalidInput("piecewise window must lie in [4, signal length]");
    }
    if (n_freq_bins < 2) {
        throw InvalidInput("imfogram needs at least 2 frequency bins");
    }
    config.validate();
    const std::size_t cols = n / J;
    const double rate = signal.sample_rate();

    std::vector<std::optional<ImfSet>> sets(cols);
    auto work = [&](std::size_t r) {
        const auto first = signal.values().begin() + static_cast<std::ptrdiff_t>(r * J);
        const Signal segment(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(J)), rate,
                             signal.time(r * J));
        sets[r] = decompose(segment, config);
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cols)));
    if (workers == 1) {
        for (std::size_t r = 0; r < cols; ++r) {
            work(r);
        }
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t r = w; r < cols; r += workers) {
                    work(r);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    PiecewiseImfogram out;
    TfrMatrix& m = out.matrix;
    m.rows = n_freq_bins;
    m.cols = cols;
    m.values.assign(m.rows * m.cols, 0.0);
    m.window_length = J;
    m.hop = J;
    const double denom = 2.0 * static_cast<double>(n_freq_bins - 1);
    for (std::size_t i = 0; i < n_freq_bins; ++i) {
        m.freq_axis.push_back(static_cast<double>(i) * rate / denom);
    }
    for (std::size_t r = 0; r < cols; ++r) {
        m.time_axis.push_back(signal.t0() + (static_cast<double>(r * J) + 0.5 * static_cast<double>(J - 1)) / rate);
        const ImfSet& set = *sets[r];
        if (!set.imfs.empty()) {
            const TfrMatrix column = imfogram(set, AveragingWindows{J, J}, n_freq_bins);
            for (std::size_t i = 0; i < n_freq_bins; ++i) {
                m.at(i, r) = column.at(i, 0);
            }
            m.clamped_above_nyquist += column.clamped_above_nyquist;
        }
        out.decompositions.push_back(std::move(*sets[r]));
    }
    return out;
}

TfrMatrix spectrogram(const Signal& signal, std::size_t window_samples, std::size_t hop_samples) {
    const std::size_t n = signal.size();
    if (window_samples < 1 || window_samples > n) {
        throw InvalidInput("spectrogram window must lie in [1, signal length]");
    }
    if (hop_samples < 1) {
        throw InvalidInput("spectrogram hop must be at least 1");
    }
    const std::size_t J = window_samples;
    const double rate = signal.sample_rate();
    TfrMatrix m;
    m.rows = J / 2 + 1;
    m.cols = (n - J) / hop_samples + 1;
    m.values.assign(m.rows * m.cols, 0.0);
    m.window_length = J;
    m.hop = hop_samples;
    for (std::size_t k = 0; k < m.rows; ++k) {
        m.freq_axis.push_back(static_cast<double>(k) * rate / static_cast<double>(J));
    }
    const auto s = signal.samples();
    for (std::size_t c = 0; c < m.cols; ++c) {
        const std::size_t first = c * hop_samples;
        m.time_axis.push_back(signal.t0() + (static_cast<double>(first) +
                                             0.5 * static_cast<double>(J - 1)) / rate);
        const auto X = spectral::forward(s.subspan(first, J));
        for (std::size_t k = 0; k < m.rows; ++k) {
            const bool unpaired = k == 0 || (J % 2 == 0 && k == J / 2);
            m.at(k, c) = (unpaired ? 1.0 : 2.0) * std::abs(X[k]) / static_cast<double>(J);
        }
    }
    return m;
}

TfrMatrix periodogram(const Signal& signal) {
    return spectrogram(signal, signal.size(), signal.size());
}

TfrMatrix hadamard_square(const TfrMatrix& matrix) {
    TfrMatrix out = matrix;
    for (auto& v : out.values) {
        v *= v;
    }
    return out;
}

double compare_tfr(const TfrMatrix& a, const TfrMatrix& b) {
    check_axes(a, b);
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        diff += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
        ref += b.values[i] * b.values[i];
    }
    if (ref == 0.0) {
        throw InvalidInput("reference matrix is identically zero");
    }
    return std::sqrt(diff / ref);
}

double compare_tfr(const TfrMatrix& a, const TfrMatrix& b, std::span<const std::size_t> cells) {
    check_axes(a, b);
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t i : cells) {
        if (i >= a.values.size()) {
            throw InvalidInput("cell index out of range");
        }
        diff += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
        ref += b.values[i] * b.values[i];
    }
    if (ref == 0.0) {
        throw InvalidInput("reference matrix is zero on the selected cells");
    }
    return std::sqrt(diff / ref);
}

std::string tfr_to_csv(const TfrMatrix& matrix) {
    std::ostringstream out;
    write_axes_csv(out, matrix, matrix.values);
    return out.str();
}

std::string tfr_to_db_csv(const TfrMatrix& matrix, double floor_db) {
    const double peak = matrix.values.empty() ? 0.0
                                              : *std::max_element(matrix.values.begin(), matrix.values.end());
    std::vector<double> cells(matrix.values.size(), floor_db);
    if (peak > 0.0) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (matrix.values[i] > 0.0) {
                cells[i] = std::max(floor_db, 20.0 * std::log10(matrix.values[i] / peak));
            }
        }
    }
    std::ostringstream out;
    write_axes_csv(out, matrix, cells);
    return out.str();
}

std::string tfr_to_pgm(const TfrMatrix& matrix, int bits) {
    if (bits != 8 && bits != 16) {
        throw InvalidInput("PGM depth must be 8 or 16 bits");
    }
    const unsigned maxval = bits == 8 ? 255u : 65535u;
    const double peak = matrix.values.empty() ? 0.0
                                              : *std::max_element(matrix.values.begin(), matrix.values.end());
    std::string out = "P5\n" + std::to_string(matrix.cols) + " " + std::to_string(matrix.rows) + "\n" +
                      std::to_string(maxval) + "\n";
    for (std::size_t rr = 0; rr < matrix.rows; ++rr) {
        const std::size_t row = matrix.rows - 1 - rr;
        for (std::size_t c = 0; c < matrix.cols; ++c) {
            const double v = peak > 0.0 ? matrix.at(row, c) / peak : 0.0;
            const auto level = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * maxval));
            if (bits == 16) {
                out.push_back(static_cast<char>((level >> 8) & 0xFF));
            }
            out.push_back(static_cast<char>(level & 0xFF));
        }
    }
    return out;
}

} // namespace imfogram
