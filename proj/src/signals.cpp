#include "imfogram/signals.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "imfogram/error.hpp"

namespace imfogram::signals {
namespace {

constexpr double kPi = std::numbers::pi;

void check_grid(std::size_t n, double sample_rate) {
    if (n < 4) {
        throw InvalidInput("generators need at least 4 samples");
    }
    if (!(sample_rate > 0.0)) {
        throw InvalidInput("sample rate must be positive");
    }
}

template <typename F>
Signal sample(std::size_t n, double sample_rate, F&& f) {
    check_grid(n, sample_rate);
    std::vector<double> s(n);
    for (std::size_t j = 0; j < n; ++j) {
        s[j] = f(static_cast<double>(j) / sample_rate);
    }
    return Signal(std::move(s), sample_rate);
}

} // namespace

Signal chirp_pair(std::size_t n, double sample_rate) {
    return sample(n, sample_rate, [](double t) {
        return std::cos(480.0 * kPi * t * t + 240.0 * kPi * t) +
               std::cos(kPi * t * t * t + 36.0 * kPi * t * t + 24.0 * kPi * t + 2.0 * kPi);
    });
}

Signal fast_chirp(std::size_t n, double sample_rate) {
    return sample(n, sample_rate,
                  [](double t) { return std::cos(480.0 * kPi * t * t + 240.0 * kPi * t); });
}

std::vector<double> noise_amplitude(std::size_t n, std::uint64_t seed, double noise_sigma) {
    if (!(noise_sigma >= 0.0)) {
        throw InvalidInput("noise sigma must be nonnegative");
    }
    std::vector<double> a(n, 0.0);
    if (noise_sigma == 0.0) {
        return a;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, noise_sigma);
    for (auto& v : a) {
        v = gauss(rng);
    }
    return a;
}

Signal noisy_triple(std::size_t n, double sample_rate, std::uint64_t seed, double noise_sigma) {
    check_grid(n, sample_rate);
    const auto amplitude = noise_amplitude(n, seed, noise_sigma);
    std::vector<double> s(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) / sample_rate;
        s[j] = std::cos(50.0 * kPi * t * t + 100.0 * kPi * t) +
               std::cos(-10.0 * kPi * t * t + 40.0 * kPi * t) +
               amplitude[j] * std::cos(400.0 * kPi * t);
    }
    return Signal(std::move(s), sample_rate);
}

double duffing_energy(double x, double v, const DuffingParameters& p) {
    return 0.5 * v * v + 0.5 * p.alpha * x * x + 0.25 * p.beta * x * x * x * x;
}

DuffingTrajectory duffing(std::size_t n, double sample_rate, const DuffingParameters& p) {
    check_grid(n, sample_rate);
    using State = std::array<double, 2>;
    auto rhs = [&p](double t, const State& y) -> State {
        const double x = y[0];
        return {y[1], p.gamma * std::cos(p.omega * t) - p.alpha * x - p.beta * x * x * x};
    };
    auto axpy = [](const State& y, double h, const State& k) -> State {
        return {y[0] + h * k[0], y[1] + h * k[1]};
    };
    const double h = 1.0 / sample_rate;
    DuffingTrajectory out;
    out.position.resize(n);
    out.velocity.resize(n);
    State y{p.x0, p.v0};
    for (std::size_t j = 0; j < n; ++j) {
        out.position[j] = y[0];
        out.velocity[j] = y[1];
        const double t = static_cast<double>(j) * h;
        const State k1 = rhs(t, y);
        const State k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
        const State k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
        const State k4 = rhs(t + h, axpy(y, h, k3));
        for (int i = 0; i < 2; ++i) {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    return out;
}

Signal duffing_velocity(std::size_t n, double sample_rate, const DuffingParameters& p) {
    return Signal(duffing(n, sample_rate, p).velocity, sample_rate);
}

Signal piecewise_multisine(std::span<const std::vector<Tone>> windows, std::size_t window_samples,
                           double sample_rate) {
    if (windows.empty()) {
        throw InvalidInput("piecewise multisine needs at least one window");
    }
    check_grid(window_samples, sample_rate);
    const double resolution = sample_rate / static_cast<double>(window_samples);
    for (const auto& tones : windows) {
        for (const auto& tone : tones) {
            const double bin = tone.frequency / resolution;
            const double nearest = std::round(bin);
            if (std::abs(bin - nearest) > 1e-9 * std::max(1.0, bin)) {
                std::ostringstream msg;
                msg << "tone at " << tone.frequency << " Hz is not on a DFT bin of the "
                    << window_samples << "-sample window; nearest admissible frequency is "
                    << nearest * resolution << " Hz";
                throw InvalidInput(msg.str());
            }
        }
    }
    std::vector<double> s(windows.size() * window_samples, 0.0);
    for (std::size_t w = 0; w < windows.size(); ++w) {
        for (std::size_t i = 0; i < window_samples; ++i) {
            const std::size_t j = w * window_samples + i;
            const double t = static_cast<double>(j) / sample_rate;
            double v = 0.0;
            for (const auto& tone : windows[w]) {
                v += tone.amplitude * std::cos(2.0 * kPi * tone.frequency * t + tone.phase);
            }
            s[j] = v;
        }
    }
    return Signal(std::move(s), sample_rate);
}

Signal two_tone(double a, double f, double phi, std::size_t n, double sample_rate) {
    return sample(n, sample_rate, [=](double x) {
        return std::cos(2.0 * kPi * x) + a * std::cos(2.0 * kPi * f * x + phi);
    });
}

Signal multi_tone(std::span<const Tone> tones, std::size_t n, double sample_rate) {
    return sample(n, sample_rate, [&](double x) {
        double v = 0.0;
        for (const auto& tone : tones) {
            v += tone.amplitude * std::cos(2.0 * kPi * tone.frequency * x + tone.phase);
        }
        return v;
    });
}

} // namespace imfogram::signals
