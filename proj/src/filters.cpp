#include "imfogram/filters.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <sstream>

#include "imfogram/error.hpp"
#include "imfogram/spectral.hpp"

namespace imfogram {
namespace {

double profile(FilterFamily family, double x) {
    const double ax = std::abs(x);
    switch (family) {
    case FilterFamily::Bump:
        return ax < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
    case FilterFamily::Triangular:
        return ax < 1.0 ? 1.0 - ax : 0.0;
    case FilterFamily::Rectangular:
        return ax <= 1.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

void normalize(std::vector<double>& taps) {
    const double sum = std::accumulate(taps.begin(), taps.end(), 0.0);
    if (!(sum > 0.0)) {
        throw InvalidInput("filter taps have no mass");
    }
    for (auto& t : taps) {
        t /= sum;
    }
}

} // namespace

std::string_view to_string(FilterFamily family) {
    switch (family) {
    case FilterFamily::Bump:
        return "bump";
    case FilterFamily::Triangular:
        return "triangular";
    case FilterFamily::Rectangular:
        return "rectangular";
    }
    return "unknown";
}

FilterFamily parse_filter_family(std::string_view name) {
    if (name == "bump") {
        return FilterFamily::Bump;
    }
    if (name == "triangular") {
        return FilterFamily::Triangular;
    }
    if (name == "rectangular") {
        return FilterFamily::Rectangular;
    }
    throw InvalidInput("unknown filter family '" + std::string(name) +
                       "' (expected bump, triangular or rectangular)");
}

Filter Filter::from_taps(std::vector<double> taps, FilterFamily family, bool is_double_convolution) {
    if (taps.size() % 2 == 0) {
        throw InvalidInput("filter needs an odd number of taps");
    }
    const std::size_t m = taps.size();
    for (std::size_t j = 0; j < m; ++j) {
        if (!std::isfinite(taps[j]) || taps[j] < 0.0) {
            throw InvalidInput("filter taps must be finite and nonnegative");
        }
        if (taps[j] != taps[m - 1 - j]) {
            throw InvalidInput("filter taps must be even-symmetric");
        }
    }
    normalize(taps);
    return Filter(std::move(taps), family, is_double_convolution);
}

Filter make_base_filter(FilterFamily family, std::size_t half_length) {
    if (half_length < 2) {
        throw InvalidInput("filter half length must be at least 2");
    }
    return make_base_filter(family, static_cast<double>(half_length));
}

Filter make_base_filter(FilterFamily family, double half_width) {
    if (!(half_width >= 2.0) || !std::isfinite(half_width)) {
        throw InvalidInput("filter half width must be at least 2");
    }
    const auto l = static_cast<std::size_t>(std::ceil(half_width));
    std::vector<double> taps(2 * l + 1);
    for (std::size_t j = 0; j <= l; ++j) {
        const double value = profile(family, static_cast<double>(j) / half_width);
        taps[l + j] = value;
        taps[l - j] = value;
    }
    return Filter::from_taps(std::move(taps), family, false);
}

Filter double_convolve(const Filter& filter) {
    const auto& a = filter.taps();
    const std::size_t m = a.size();
    std::vector<double> out(2 * m - 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            out[i + j] += a[i] * a[j];
        }
    }
    // Summation order differs between mirrored entries; restore exact symmetry.
    const std::size_t k = out.size();
    for (std::size_t j = 0; j < k / 2; ++j) {
        const double v = 0.5 * (out[j] + out[k - 1 - j]);
        out[j] = v;
        out[k - 1 - j] = v;
    }
    return Filter::from_taps(std::move(out), filter.family(), true);
}

std::vector<double> filter_dft_padded(const Filter& filter, std::size_t n) {
    if (filter.support() > n) {
        throw DomainError("filter support (" + std::to_string(filter.support()) +
                          " taps) exceeds the signal length (" + std::to_string(n) +
                          "); extend the signal first");
    }
    const auto& taps = filter.taps();
    const std::size_t l = filter.half_length();
    std::vector<double> buffer(n, 0.0);
    for (std::size_t j = 0; j < taps.size(); ++j) {
        buffer[(j + n - l) % n] += taps[j];
    }
    const auto spectrum = spectral::forward(buffer);
    std::vector<double> response(n);
    for (std::size_t k = 0; k < n; ++k) {
        response[k] = 0.5 * (spectrum[k].real() + spectrum[(n - k) % n].real());
    }
    return response;
}

double filter_response(const Filter& filter, double cycles_per_sample) {
    const auto& taps = filter.taps();
    const std::size_t l = filter.half_length();
    const double omega = 2.0 * std::numbers::pi * cycles_per_sample;
    double sum = taps[l];
    for (std::size_t j = 1; j <= l; ++j) {
        sum += 2.0 * taps[l + j] * std::cos(omega * static_cast<double>(j));
    }
    return sum;
}

std::vector<Extremum> find_extrema(std::span<const double> values) {
    // Collapse runs of equal values, then test each interior run against
    // its neighbouring runs.
    struct Run {
        double value;
        std::size_t first;
        std::size_t last;
    };
    std::vector<Run> runs;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (!runs.empty() && runs.back().value == values[j]) {
            runs.back().last = j;
        } else {
            runs.push_back({values[j], j, j});
        }
    }
    std::vector<Extremum> out;
    for (std::size_t r = 1; r + 1 < runs.size(); ++r) {
        const double prev = runs[r - 1].value;
        const double cur = runs[r].value;
        const double next = runs[r + 1].value;
        const double position = 0.5 * static_cast<double>(runs[r].first + runs[r].last);
        if (cur > prev && cur > next) {
            out.push_back({position, true});
        } else if (cur < prev && cur < next) {
            out.push_back({position, false});
        }
    }
    return out;
}

std::size_t count_extrema(std::span<const double> values) {
    return find_extrema(values).size();
}

std::size_t count_extrema(const Signal& signal) {
    return count_extrema(signal.samples());
}

std::optional<FilterLength> estimate_filter_length(std::span<const double> values, double chi) {
    if (!(chi > 0.0)) {
        throw InvalidInput("chi must be positive");
    }
    const std::size_t k = count_extrema(values);
    if (k < 2) {
        return std::nullopt;
    }
    const double ratio = chi * static_cast<double>(values.size()) / static_cast<double>(k);
    const auto l = 2 * static_cast<std::size_t>(std::floor(ratio));
    if (l < 2) {
        return FilterLength{2, true};
    }
    return FilterLength{l, false};
}

std::optional<FilterLength> estimate_filter_length(const Signal& signal, double chi) {
    return estimate_filter_length(signal.samples(), chi);
}

std::optional<std::size_t> highest_spectral_peak(std::span<const double> values,
                                                 double relative_threshold) {
    const std::size_t n = values.size();
    if (n < 4) {
        return std::nullopt;
    }
    const auto spectrum = spectral::forward(values);
    const std::size_t top = n / 2;
    std::vector<double> mag(top + 1);
    for (std::size_t k = 0; k <= top; ++k) {
        mag[k] = std::abs(spectrum[k]);
    }
    const double peak = *std::max_element(mag.begin() + 1, mag.end());
    if (!(peak > 0.0)) {
        return std::nullopt;
    }
    const double floor = relative_threshold * peak;
    for (std::size_t k = top; k >= 1; --k) {
        const bool left_ok = mag[k] >= mag[k - 1];
        const bool right_ok = k == top || mag[k] >= mag[k + 1];
        if (mag[k] >= floor && left_ok && right_ok) {
            return k;
        }
    }
    return std::nullopt;
}

std::optional<FilterLength> estimate_filter_length_from_peak(std::span<const double> values,
                                                             double chi) {
    if (!(chi > 0.0)) {
        throw InvalidInput("chi must be positive");
    }
    const auto bin = highest_spectral_peak(values);
    if (!bin) {
        return std::nullopt;
    }
    const double period = static_cast<double>(values.size()) / static_cast<double>(*bin);
    const auto l = static_cast<std::size_t>(std::llround(chi * period));
    if (l < 2) {
        return FilterLength{2, true};
    }
    return FilterLength{l, false};
}

std::optional<double> first_response_zero(const Filter& filter) {
    const double step = 1.0 / (32.0 * static_cast<double>(filter.support()));
    double lo = 0.0;
    double f_lo = filter_response(filter, 0.0);
    for (double f = step; f <= 0.5; f += step) {
        const double value = filter_response(filter, f);
        if ((value <= 0.0) != (f_lo <= 0.0)) {
            double hi = f;
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double v = filter_response(filter, mid);
                if ((v <= 0.0) == (f_lo <= 0.0)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        lo = f;
        f_lo = value;
    }
    return std::nullopt;
}

double tune_half_width(FilterFamily family, double cycles_per_sample) {
    if (!(cycles_per_sample > 0.0) || cycles_per_sample >= 0.5) {
        throw DomainError("target frequency must lie in (0, 0.5) cycles per sample");
    }
    auto zero_at = [&](double h) {
        auto z = first_response_zero(make_base_filter(family, h));
        return z ? *z : 0.5;
    };
    // First zeros scale like c / h; bracket then bisect on h.
    double lo = 2.0;
    if (zero_at(lo) < cycles_per_sample) {
        throw DomainError("target frequency is too high for the shortest admissible filter");
    }
    double hi = std::max(4.0, 2.0 / cycles_per_sample);
    while (zero_at(hi) > cycles_per_sample) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (zero_at(mid) > cycles_per_sample) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Filter make_fif_filter(FilterFamily family, std::size_t half_length, bool double_convolution) {
    if (double_convolution) {
        const std::size_t base = std::max<std::size_t>(2, (half_length + 1) / 2);
        return double_convolve(make_base_filter(family, base));
    }
    return make_base_filter(family, std::max<std::size_t>(2, half_length));
}

std::string filter_to_csv(const Filter& filter) {
    std::ostringstream out;
    out << std::setprecision(17);
    for (double t : filter.taps()) {
        out << t << '\n';
    }
    return out.str();
}

} // namespace imfogram
