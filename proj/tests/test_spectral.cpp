#include <doctest.h>

#include <imfogram/error.hpp>
#include <imfogram/signal.hpp>
#include <imfogram/spectral.hpp>

#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

using namespace imfogram;
using Complex = std::complex<double>;

namespace {

std::vector<double> cosine8() {
    std::vector<double> s(8);
    for (std::size_t j = 0; j < 8; ++j) {
        s[j] = std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / 8.0);
    }
    return s;
}

} // namespace

TEST_CASE("signal rejects invalid construction") {
    CHECK_THROWS_AS(Signal({1.0}, 1.0), InvalidInput);
    CHECK_THROWS_AS(Signal({1.0, 2.0}, 0.0), InvalidInput);
    CHECK_THROWS_AS(Signal({1.0, 2.0}, -3.0), InvalidInput);
    CHECK_THROWS_AS(Signal({1.0, std::numeric_limits<double>::quiet_NaN()}, 1.0), InvalidInput);
    CHECK_THROWS_AS(Signal({1.0, std::numeric_limits<double>::infinity()}, 1.0), InvalidInput);
    const Signal s({1.0, 2.0, 3.0, 4.0}, 4.0, 0.5);
    CHECK(s.duration() == doctest::Approx(1.0));
    CHECK(s.time(2) == doctest::Approx(1.0));
}

TEST_CASE("dft of a constant is DC only") {
    const auto spec = spectral::dft(Signal({1, 1, 1, 1}, 4.0));
    REQUIRE(spec.size() == 4);
    CHECK(std::abs(spec.coefficients[0] - Complex(4.0, 0.0)) < 1e-14);
    for (std::size_t k = 1; k < 4; ++k) {
        CHECK(std::abs(spec.coefficients[k]) < 1e-14);
    }
    CHECK(spec.frequency_step == doctest::Approx(1.0));
}

TEST_CASE("dft of an impulse is flat") {
    const auto spec = spectral::dft(Signal({1, 0, 0, 0}, 1.0));
    for (const auto& c : spec.coefficients) {
        CHECK(std::abs(c - Complex(1.0, 0.0)) < 1e-14);
    }
}

TEST_CASE("dft of an 8-point cosine matches the direct sum") {
    const auto s = cosine8();
    const auto spec = spectral::dft(Signal(s, 8.0));
    const auto ref = oracle::naive_dft(s);
    CHECK(oracle::max_abs_diff(spec.coefficients, ref) < 1e-12);
    CHECK(std::abs(spec.coefficients[1]) == doctest::Approx(4.0));
    CHECK(std::abs(spec.coefficients[7]) == doctest::Approx(4.0));
    for (std::size_t k : {0, 2, 3, 4, 5, 6}) {
        CHECK(std::abs(spec.coefficients[k]) < 1e-12);
    }
}

TEST_CASE("forward and inverse agree with direct sums for many lengths") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {2u, 3u, 7u, 16u, 31u, 97u, 128u, 200u, 251u, 256u}) {
        const auto x = oracle::random_signal(n, rng);
        const auto fast = spectral::forward(std::span<const double>(x));
        const auto ref = oracle::naive_dft(x);
        CHECK(oracle::max_abs_diff(fast, ref) <= 1e-10 * oracle::max_abs(ref));

        const auto back = spectral::inverse(ref);
        const auto ref_back = oracle::naive_idft(ref);
        CHECK(oracle::max_abs_diff(back, ref_back) <= 1e-10 * oracle::max_abs(ref_back));
    }
}

TEST_CASE("idft round trip") {
    std::mt19937_64 rng(3);
    for (std::size_t n : {4u, 100u, 1000u, 1024u, 1237u}) {
        const Signal s(oracle::random_signal(n, rng), 50.0);
        const Signal back = spectral::idft(spectral::dft(s));
        CHECK(back.sample_rate() == doctest::Approx(50.0));
        CHECK(oracle::relative_l2(back.values(), s.values()) <= 1e-12);
    }
}

TEST_CASE("idft of the all-ones spectrum is an impulse") {
    Spectrum spec{std::vector<Complex>(4, Complex(1.0, 0.0)), 1.0};
    const Signal s = spectral::idft(spec);
    CHECK(s[0] == doctest::Approx(1.0));
    for (std::size_t j = 1; j < 4; ++j) {
        CHECK(std::abs(s[j]) < 1e-15);
    }
}

TEST_CASE("idft recovers the cosine and leaves negligible imaginary residue") {
    const auto s = cosine8();
    const auto ref_spec = oracle::naive_dft(s);
    const Signal back = spectral::idft(Spectrum{ref_spec, 1.0});
    for (std::size_t j = 0; j < 8; ++j) {
        CHECK(std::abs(back[j] - s[j]) <= 1e-12);
    }
    std::mt19937_64 rng(5);
    const auto x = oracle::random_signal(301, rng);
    const auto full = spectral::inverse(spectral::forward(std::span<const double>(x)));
    double imag = 0.0;
    double real = 0.0;
    for (const auto& c : full) {
        imag = std::max(imag, std::abs(c.imag()));
        real = std::max(real, std::abs(c.real()));
    }
    CHECK(imag <= 1e-10 * real);
}

TEST_CASE("norm2 examples") {
    CHECK(spectral::norm2(Signal(std::vector<double>(37, 0.0), 5.0)) == 0.0);
    const Signal ones(std::vector<double>(100, 1.0), 100.0);
    CHECK(spectral::norm2(ones) == doctest::Approx(0.1).epsilon(1e-14));
    std::mt19937_64 rng(8);
    const Signal s(oracle::random_signal(64, rng), 3.0);
    std::vector<double> scaled(s.values());
    for (auto& v : scaled) {
        v *= -2.5;
    }
    CHECK(spectral::norm2(s.with_samples(scaled)) == doctest::Approx(2.5 * spectral::norm2(s)).epsilon(1e-14));
}

TEST_CASE("local_norm2") {
    std::mt19937_64 rng(9);
    const Signal s(oracle::random_signal(50, rng), 10.0, 2.0);
    CHECK(spectral::local_norm2(s, s.time(0), s.time(49)) == doctest::Approx(spectral::norm2(s)).epsilon(1e-14));

    std::vector<double> v(20, 1.0);
    for (std::size_t j = 5; j <= 9; ++j) {
        v[j] = 0.0;
    }
    const Signal holes(v, 1.0);
    CHECK(spectral::local_norm2(holes, 5.0, 9.0) == 0.0);

    std::vector<double> ramp(10);
    for (std::size_t j = 0; j < 10; ++j) {
        ramp[j] = static_cast<double>(j);
    }
    const Signal r(ramp, 10.0);
    CHECK(spectral::local_norm2(r, 0.1, 0.3) == doctest::Approx(0.1 * std::sqrt(14.0)).epsilon(1e-14));

    CHECK_THROWS_AS(spectral::local_norm2(r, 0.15, 0.3), DomainError);
    CHECK_THROWS_AS(spectral::local_norm2(r, 0.1, 0.95), DomainError);
    CHECK_THROWS_AS(spectral::local_norm2(r, -0.1, 0.3), DomainError);
    CHECK_THROWS_AS(spectral::local_norm2(r, 0.3, 0.1), DomainError);
}

TEST_CASE("l1 Fourier energy examples") {
    CHECK(spectral::l1_fourier_energy(Signal(std::vector<double>(8, 0.0), 1.0)) == 0.0);
    std::vector<double> impulse(8, 0.0);
    impulse[0] = 1.0;
    CHECK(spectral::l1_fourier_energy(Signal(impulse, 1.0)) == doctest::Approx(8.0).epsilon(1e-14));
    const auto s = cosine8();
    CHECK(spectral::l1_fourier_energy(Signal(s, 1.0)) == doctest::Approx(8.0).epsilon(1e-12));
    double oracle_sum = 0.0;
    for (const auto& c : oracle::naive_dft(s)) {
        oracle_sum += std::abs(c);
    }
    CHECK(spectral::l1_fourier_energy(Signal(s, 1.0)) == doctest::Approx(oracle_sum).epsilon(1e-12));
}

TEST_CASE("property: Parseval, linearity, conjugate symmetry, subadditivity") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> len(4, 600);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = len(rng);
        const double rate = 1.0 + std::abs(coef(rng)) * 10.0;
        const Signal s(oracle::random_signal(n, rng), rate);
        const Signal z(oracle::random_signal(n, rng), rate);
        const auto S = spectral::dft(s);
        const auto Z = spectral::dft(z);

        double power = 0.0;
        for (const auto& c : S.coefficients) {
            power += std::norm(c);
        }
        const double L = s.duration();
        const double parseval = (L / static_cast<double>(n)) * std::sqrt(power) / std::sqrt(static_cast<double>(n));
        CHECK(parseval == doctest::Approx(spectral::norm2(s)).epsilon(1e-12));
        CHECK(spectral::norm2_from_spectrum(S.coefficients, rate) == doctest::Approx(spectral::norm2(s)).epsilon(1e-12));

        const double a = coef(rng);
        const double b = coef(rng);
        std::vector<double> mix(n);
        for (std::size_t j = 0; j < n; ++j) {
            mix[j] = a * s[j] + b * z[j];
        }
        const auto M = spectral::dft(s.with_samples(mix));
        double err = 0.0;
        double ref = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const Complex expect = a * S.coefficients[k] + b * Z.coefficients[k];
            err = std::max(err, std::abs(M.coefficients[k] - expect));
            ref = std::max(ref, std::abs(expect));
        }
        CHECK(err <= 1e-12 * ref);

        double asym = 0.0;
        double scale = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            asym = std::max(asym, std::abs(S.coefficients[n - k] - std::conj(S.coefficients[k])));
            scale = std::max(scale, std::abs(S.coefficients[k]));
        }
        CHECK(asym <= 1e-12 * scale);

        std::vector<double> sum(n);
        for (std::size_t j = 0; j < n; ++j) {
            sum[j] = s[j] + z[j];
        }
        CHECK(spectral::l1_fourier_energy(s.with_samples(sum))
              <= spectral::l1_fourier_energy(s) + spectral::l1_fourier_energy(z) + 1e-10);
        CHECK(spectral::l1_fourier_energy(s) >= std::abs(S.coefficients[0]));
    }
}

TEST_CASE("transforms of distinct signals may run concurrently") {
    std::mt19937_64 rng(77);
    std::vector<std::vector<double>> inputs;
    for (int i = 0; i < 8; ++i) {
        inputs.push_back(oracle::random_signal(100 + static_cast<std::size_t>(i) * 37, rng));
    }
    std::vector<std::vector<Complex>> serial;
    for (const auto& x : inputs) {
        serial.push_back(spectral::forward(std::span<const double>(x)));
    }
    std::vector<std::vector<Complex>> parallel(inputs.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        pool.emplace_back([&, i] { parallel[i] = spectral::forward(std::span<const double>(inputs[i])); });
    }
    for (auto& t : pool) {
        t.join();
    }
    CHECK(parallel == serial);
}
