#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "imfogram/signal.hpp"

namespace imfogram::signals {

/// cos(480 pi t^2 + 240 pi t) + cos(pi t^3 + 36 pi t^2 + 24 pi t + 2 pi),
/// sampled at t_j = j / sample_rate.
Signal chirp_pair(std::size_t n, double sample_rate);

/// The first chirp alone, whose instantaneous frequency is 480 t + 120 Hz.
Signal fast_chirp(std::size_t n, double sample_rate);

/// cos(50 pi t^2 + 100 pi t) + cos(-10 pi t^2 + 40 pi t) + A(t) cos(400 pi t)
/// with A(t) i.i.d. Gaussian(0, noise_sigma^2) from a seeded generator.
Signal noisy_triple(std::size_t n, double sample_rate, std::uint64_t seed, double noise_sigma = 0.18);

/// The noise amplitude sequence A(t_j) noisy_triple draws for a seed.
std::vector<double> noise_amplitude(std::size_t n, std::uint64_t seed, double noise_sigma = 0.18);

struct DuffingParameters {
    double alpha = -1.0;
    double beta = 1.0;
    double gamma = 0.1;
    double omega = 1.0;
    double x0 = 1.0;
    double v0 = 0.0;
};

struct DuffingTrajectory {
    std::vector<double> position;
    std::vector<double> velocity;
};

/// x'' + alpha x + beta x^3 = gamma cos(omega t) integrated with classical
/// fixed-step RK4, one step per sample (h = 1 / sample_rate), from t = 0.
DuffingTrajectory duffing(std::size_t n, double sample_rate, const DuffingParameters& p = {});

/// Velocity x'(t_j) of the trajectory above.
Signal duffing_velocity(std::size_t n, double sample_rate, const DuffingParameters& p = {});

/// H = v^2/2 + alpha x^2/2 + beta x^4/4 of the unforced system.
double duffing_energy(double x, double v, const DuffingParameters& p);

struct Tone {
    double amplitude;
    double frequency; // Hz
    double phase;     // rad
};

/// Concatenation of stationary segments of `window_samples` samples; segment
/// i is sum a cos(2 pi f t + phi) over its tones, with t the global time.
/// Every frequency must be an exact DFT bin of the window (InvalidInput
/// otherwise, naming the nearest admissible frequency).
Signal piecewise_multisine(std::span<const std::vector<Tone>> windows, std::size_t window_samples,
                           double sample_rate);

/// cos(2 pi x) + a cos(2 pi f x + phi) with x_j = j / sample_rate.
Signal two_tone(double a, double f, double phi, std::size_t n, double sample_rate);

/// Sum of tones on the grid x_j = j / sample_rate.
Signal multi_tone(std::span<const Tone> tones, std::size_t n, double sample_rate);

} // namespace imfogram::signals
