#pragma once

#include <complex>
#include <span>
#include <vector>

#include "imfogram/signal.hpp"

namespace imfogram::spectral {

using Complex = std::complex<double>;

// Raw transforms on sequences of any length. Forward is unscaled,
// X_k = sum_j x_j exp(-2 pi i j k / n); the inverse carries the 1/n.
std::vector<Complex> forward(std::span<const Complex> x);
std::vector<Complex> forward(std::span<const double> x);
std::vector<Complex> inverse(std::span<const Complex> x);

/// DFT of a signal. Bin spacing is 1/L with L = n / sample_rate.
Spectrum dft(const Signal& signal);

/// Inverse DFT, keeping the real part. The sample rate is recovered from
/// the bin spacing; the time origin defaults to zero.
Signal idft(const Spectrum& spectrum, double t0 = 0.0);

/// Normalized 2-norm (L/n) * sqrt(sum s_j^2).
double norm2(const Signal& signal);

/// Normalized 2-norm restricted to the closed interval [a, b]. Both ends
/// must be grid points of the signal (to within 1e-9 of a sample step).
double local_norm2(const Signal& signal, double a, double b);

/// Sum of moduli of all DFT coefficients.
double l1_fourier_energy(const Signal& signal);
double l1_fourier_energy(const Spectrum& spectrum);

/// Normalized 2-norm of a signal computed from its spectrum (Parseval).
double norm2_from_spectrum(std::span<const Complex> coefficients, double sample_rate);

} // namespace imfogram::spectral
