#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace imfogram {

/// Uniformly sampled real time series. Grid points are t_j = t0 + j / sample_rate.
///
/// Construction validates the invariants (n >= 2, sample_rate > 0, finite
/// samples) and throws InvalidInput otherwise; a constructed Signal is
/// immutable.
class Signal {
public:
    Signal(std::vector<double> samples, double sample_rate, double t0 = 0.0);

    [[nodiscard]] std::span<const double> samples() const noexcept { return samples_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return samples_; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] double sample_rate() const noexcept { return sample_rate_; }
    [[nodiscard]] double t0() const noexcept { return t0_; }
    [[nodiscard]] double dt() const noexcept { return 1.0 / sample_rate_; }
    /// Length L of the time span, n / sample_rate.
    [[nodiscard]] double duration() const noexcept;
    [[nodiscard]] double time(std::size_t j) const noexcept;
    [[nodiscard]] double operator[](std::size_t j) const noexcept { return samples_[j]; }

    /// Same grid, different values.
    [[nodiscard]] Signal with_samples(std::vector<double> samples) const;

    friend bool operator==(const Signal&, const Signal&) = default;

private:
    std::vector<double> samples_;
    double sample_rate_;
    double t0_;
};

/// DFT coefficients; bin k sits at frequency k * frequency_step = k / L.
struct Spectrum {
    std::vector<std::complex<double>> coefficients;
    double frequency_step = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return coefficients.size(); }
    [[nodiscard]] double frequency(std::size_t k) const noexcept {
        return static_cast<double>(k) * frequency_step;
    }
};

} // namespace imfogram
