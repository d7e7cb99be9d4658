#include "imfogram/fif.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "imfogram/error.hpp"
#include "imfogram/spectral.hpp"

namespace imfogram {

std::string_view to_string(ExtensionMode mode) {
    switch (mode) {
    case ExtensionMode::None:
        return "none";
    case ExtensionMode::Symmetric:
        return "symmetric";
    case ExtensionMode::Periodic:
        return "periodic";
    case ExtensionMode::Antisymmetric:
        return "antisymmetric";
    }
    return "unknown";
}

std::string_view to_string(FilterMode mode) {
    return mode == FilterMode::DoubleConvolution ? "double" : "raw";
}

std::string_view to_string(LengthStrategy strategy) {
    switch (strategy) {
    case LengthStrategy::Extrema:
        return "extrema";
    case LengthStrategy::SpectralPeak:
        return "peak";
    case LengthStrategy::TunedZero:
        return "tuned";
    }
    return "unknown";
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
    case StopReason::NoExtrema:
        return "no-extrema";
    case StopReason::MaxImfs:
        return "max-imfs";
    case StopReason::FilterExceedsSignal:
        return "filter-exceeds-signal";
    }
    return "unknown";
}

ExtensionMode parse_extension_mode(std::string_view name) {
    for (auto mode : {ExtensionMode::None, ExtensionMode::Symmetric, ExtensionMode::Periodic,
                      ExtensionMode::Antisymmetric}) {
        if (name == to_string(mode)) {
            return mode;
        }
    }
    throw InvalidInput("unknown extension mode '" + std::string(name) + "'");
}

FilterMode parse_filter_mode(std::string_view name) {
    if (name == "double") {
        return FilterMode::DoubleConvolution;
    }
    if (name == "raw") {
        return FilterMode::Raw;
    }
    throw InvalidInput("unknown filter mode '" + std::string(name) + "' (expected double or raw)");
}

LengthStrategy parse_length_strategy(std::string_view name) {
    for (auto s : {LengthStrategy::Extrema, LengthStrategy::SpectralPeak, LengthStrategy::TunedZero}) {
        if (name == to_string(s)) {
            return s;
        }
    }
    throw InvalidInput("unknown filter-length strategy '" + std::string(name) + "'");
}

void FifConfig::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw InvalidInput("delta must be positive");
    }
    if (!(chi >= 1.1 && chi <= 2.0)) {
        throw InvalidInput("chi must lie in [1.1, 2]");
    }
    if (max_imfs < 1) {
        throw InvalidInput("max_imfs must be at least 1");
    }
    if (max_inner_iterations < 1) {
        throw InvalidInput("max_inner_iterations must be at least 1");
    }
}

Signal extend_signal(const Signal& signal, std::size_t pad_samples, ExtensionMode mode) {
    const std::size_t n = signal.size();
    const auto s = signal.samples();
    if (mode == ExtensionMode::None || pad_samples == 0) {
        return signal;
    }
    if (mode != ExtensionMode::Periodic && pad_samples >= n) {
        throw InvalidInput("reflection needs pad (" + std::to_string(pad_samples) +
                           ") smaller than the signal length (" + std::to_string(n) + ")");
    }
    std::vector<double> out(n + 2 * pad_samples);
    std::copy(s.begin(), s.end(), out.begin() + static_cast<std::ptrdiff_t>(pad_samples));
    for (std::size_t i = 1; i <= pad_samples; ++i) {
        double left = 0.0;
        double right = 0.0;
        switch (mode) {
        case ExtensionMode::Symmetric:
            left = s[i];
            right = s[n - 1 - i];
            break;
        case ExtensionMode::Antisymmetric:
            left = 2.0 * s[0] - s[i];
            right = 2.0 * s[n - 1] - s[n - 1 - i];
            break;
        case ExtensionMode::Periodic:
            left = s[(n - i % n) % n];
            right = s[(i - 1) % n];
            break;
        case ExtensionMode::None:
            break;
        }
        out[pad_samples - i] = left;
        out[pad_samples + n - 1 + i] = right;
    }
    return Signal(std::move(out), signal.sample_rate(),
                  signal.t0() - static_cast<double>(pad_samples) / signal.sample_rate());
}

namespace {

Signal apply_multiplier(const Signal& signal, const std::vector<double>& multiplier) {
    auto spectrum = spectral::forward(signal.samples());
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        spectrum[k] *= multiplier[k];
    }
    const auto values = spectral::inverse(spectrum);
    std::vector<double> out(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        out[j] = values[j].real();
    }
    return signal.with_samples(std::move(out));
}

} // namespace

Signal moving_average(const Signal& signal, const Filter& filter) {
    return apply_multiplier(signal, filter_dft_padded(filter, signal.size()));
}

Signal variation(const Signal& signal, const Filter& filter) {
    const Signal average = moving_average(signal, filter);
    std::vector<double> out(signal.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = signal[j] - average[j];
    }
    return signal.with_samples(std::move(out));
}

ImfExtraction extract_imf(const Signal& signal, const Filter& filter, double delta,
                          std::size_t max_iter, FilterMode mode) {
    if (!(delta > 0.0)) {
        throw InvalidInput("delta must be positive");
    }
    if (max_iter < 1) {
        throw InvalidInput("max_iter must be at least 1");
    }
    if (mode == FilterMode::DoubleConvolution && !filter.is_double_convolution()) {
        throw InvalidInput("extract_imf needs a double-convolution filter (use FilterMode::Raw to override)");
    }
    const std::size_t n = signal.size();
    const double rate = signal.sample_rate();
    const auto spectrum = spectral::forward(signal.samples());
    auto response = filter_dft_padded(filter, n);
    if (filter.is_double_convolution()) {
        // |h_hat|^2 in exact arithmetic; the DC bin can land a few ulps above 1
        for (double& r : response) {
            r = std::clamp(r, 0.0, 1.0);
        }
    }

    ImfMeta meta;
    meta.filter_length = filter.half_length();
    meta.family = filter.family();
    meta.double_convolution = filter.is_double_convolution();
    meta.start_norm = spectral::norm2_from_spectrum(spectrum, rate);

    const double scale = 1.0 / (std::sqrt(static_cast<double>(n)) * rate);
    const double threshold = delta * meta.start_norm;
    std::vector<double> multiplier(n, 1.0);
    std::vector<double> power(n);
    for (std::size_t k = 0; k < n; ++k) {
        power[k] = std::norm(spectrum[k]);
    }

    bool converged = false;
    while (meta.iterations < max_iter) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double step = multiplier[k] * response[k];
            sum += step * step * power[k];
            multiplier[k] *= 1.0 - response[k];
        }
        const double diff = std::sqrt(sum) * scale;
        meta.diff_norms.push_back(diff);
        ++meta.iterations;
        if (diff <= threshold) {
            converged = true;
            break;
        }
    }
    meta.reached_max_iterations = !converged;

    std::vector<spectral::Complex> imf_spectrum(n);
    for (std::size_t k = 0; k < n; ++k) {
        imf_spectrum[k] = spectrum[k] * multiplier[k];
    }
    const auto values = spectral::inverse(imf_spectrum);
    std::vector<double> imf(n);
    for (std::size_t j = 0; j < n; ++j) {
        imf[j] = values[j].real();
    }
    meta.multiplier = std::move(multiplier);
    return ImfExtraction{signal.with_samples(std::move(imf)), std::move(meta)};
}

std::optional<FilterChoice> choose_filter(std::span<const double> remainder, const FifConfig& config) {
    const bool dbl = config.filter_mode == FilterMode::DoubleConvolution;
    switch (config.length_strategy) {
    case LengthStrategy::Extrema:
    case LengthStrategy::SpectralPeak: {
        const auto length = config.length_strategy == LengthStrategy::Extrema
                                ? estimate_filter_length(remainder, config.chi)
                                : estimate_filter_length_from_peak(remainder, config.chi);
        if (!length) {
            return std::nullopt;
        }
        return FilterChoice{make_fif_filter(config.filter_family, length->half_length, dbl),
                            length->clamped};
    }
    case LengthStrategy::TunedZero: {
        const auto bin = highest_spectral_peak(remainder);
        if (!bin) {
            return std::nullopt;
        }
        const double target = static_cast<double>(*bin) / static_cast<double>(remainder.size());
        double width = 2.0;
        bool clamped = false;
        try {
            width = tune_half_width(config.filter_family, target);
        } catch (const DomainError&) {
            clamped = true; // peak too close to Nyquist for any admissible filter
        }
        Filter base = make_base_filter(config.filter_family, width);
        return FilterChoice{dbl ? double_convolve(base) : std::move(base), clamped};
    }
    }
    return std::nullopt;
}

ImfSet decompose(const Signal& signal, const FifConfig& config) {
    config.validate();
    if (signal.size() < 4) {
        throw InvalidInput("decompose needs at least 4 samples");
    }
    const std::size_t n = signal.size();
    const FilterMode mode = config.filter_mode;
    std::vector<double> remainder = signal.values();
    std::vector<Signal> imfs;
    std::vector<ImfMeta> metas;
    StopReason reason = StopReason::NoExtrema;

    while (true) {
        if (count_extrema(remainder) < 2) {
            reason = StopReason::NoExtrema;
            break;
        }
        if (imfs.size() == config.max_imfs) {
            reason = StopReason::MaxImfs;
            break;
        }
        auto choice = choose_filter(remainder, config);
        if (!choice) {
            reason = StopReason::NoExtrema;
            break;
        }
        const Filter& filter = choice->filter;
        std::size_t pad = 0;
        if (config.extension != ExtensionMode::None) {
            pad = 2 * filter.support();
            if (config.extension != ExtensionMode::Periodic) {
                pad = std::min(pad, n - 1);
            }
        }
        if (filter.support() > n + 2 * pad) {
            reason = StopReason::FilterExceedsSignal;
            break;
        }
        const Signal current = signal.with_samples(remainder);
        const Signal working = extend_signal(current, pad, config.extension);
        auto extraction = extract_imf(working, filter, config.delta, config.max_inner_iterations, mode);
        const auto extended = extraction.imf.samples();
        std::vector<double> imf(extended.begin() + static_cast<std::ptrdiff_t>(pad),
                                extended.begin() + static_cast<std::ptrdiff_t>(pad + n));
        for (std::size_t j = 0; j < n; ++j) {
            remainder[j] -= imf[j];
        }
        extraction.meta.length_clamped = choice->clamped;
        extraction.meta.pad = pad;
        if (pad != 0) {
            extraction.meta.multiplier.clear();
        }
        imfs.push_back(signal.with_samples(std::move(imf)));
        metas.push_back(std::move(extraction.meta));
    }

    return ImfSet{std::move(imfs), signal.with_samples(std::move(remainder)), std::move(metas), reason,
                  config};
}

Signal reconstruct(const ImfSet& imf_set) {
    std::vector<double> sum = imf_set.trend.values();
    for (const auto& imf : imf_set.imfs) {
        if (imf.size() != sum.size()) {
            throw InvalidInput("IMF length differs from trend length");
        }
        for (std::size_t j = 0; j < sum.size(); ++j) {
            sum[j] += imf[j];
        }
    }
    return imf_set.trend.with_samples(std::move(sum));
}

} // namespace imfogram
