#include "imfogram/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "imfogram/error.hpp"

namespace imfogram::spectral {
namespace {

// FFTW planning is not thread safe, execution of an existing plan on
// fresh (aligned) arrays is. Plans are created once per (size, direction)
// with FFTW_ESTIMATE, which keeps results deterministic run to run.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        auto* in = fftw_alloc_complex(static_cast<std::size_t>(n));
        auto* out = fftw_alloc_complex(static_cast<std::size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
        if (plan == nullptr) {
            throw Error("FFTW failed to create a plan of size " + std::to_string(n));
        }
        plans_.emplace(key, plan);
        return plan;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

struct FftwDeleter {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuffer allocate(std::size_t n) {
    return FftwBuffer(fftw_alloc_complex(n));
}

std::vector<Complex> transform(std::span<const Complex> x, int sign) {
    const std::size_t n = x.size();
    if (n == 0) {
        return {};
    }
    fftw_plan plan = PlanCache::instance().get(static_cast<int>(n), sign);
    auto in = allocate(n);
    auto out = allocate(n);
    for (std::size_t j = 0; j < n; ++j) {
        in[j][0] = x[j].real();
        in[j][1] = x[j].imag();
    }
    fftw_execute_dft(plan, in.get(), out.get());
    std::vector<Complex> result(n);
    for (std::size_t k = 0; k < n; ++k) {
        result[k] = Complex(out[k][0], out[k][1]);
    }
    return result;
}

void require_finite(std::span<const Complex> x) {
    for (const auto& c : x) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw InvalidInput("non-finite spectral coefficient");
        }
    }
}

} // namespace

std::vector<Complex> forward(std::span<const Complex> x) {
    return transform(x, FFTW_FORWARD);
}

std::vector<Complex> forward(std::span<const double> x) {
    std::vector<Complex> c(x.begin(), x.end());
    return transform(c, FFTW_FORWARD);
}

std::vector<Complex> inverse(std::span<const Complex> x) {
    auto result = transform(x, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(x.size());
    for (auto& c : result) {
        c *= scale;
    }
    return result;
}

Spectrum dft(const Signal& signal) {
    return Spectrum{forward(signal.samples()), 1.0 / signal.duration()};
}

Signal idft(const Spectrum& spectrum, double t0) {
    if (spectrum.size() < 2) {
        throw InvalidInput("spectrum needs at least 2 coefficients");
    }
    if (!(spectrum.frequency_step > 0.0)) {
        throw InvalidInput("spectrum frequency step must be positive");
    }
    require_finite(spectrum.coefficients);
    auto values = inverse(spectrum.coefficients);
    std::vector<double> samples(values.size());
    std::transform(values.begin(), values.end(), samples.begin(),
                   [](const Complex& c) { return c.real(); });
    const double rate = spectrum.frequency_step * static_cast<double>(spectrum.size());
    return Signal(std::move(samples), rate, t0);
}

double norm2(const Signal& signal) {
    double sum = 0.0;
    for (double s : signal.samples()) {
        sum += s * s;
    }
    // L / n == 1 / sample_rate
    return std::sqrt(sum) / signal.sample_rate();
}

double local_norm2(const Signal& signal, double a, double b) {
    const double rate = signal.sample_rate();
    auto to_index = [&](double t, const char* name) {
        const double pos = (t - signal.t0()) * rate;
        const double rounded = std::round(pos);
        if (std::abs(pos - rounded) > 1e-9 * std::max(1.0, std::abs(pos))) {
            throw DomainError(std::string(name) + " is not a grid point of the signal");
        }
        if (rounded < 0.0 || rounded > static_cast<double>(signal.size() - 1)) {
            throw DomainError(std::string(name) + " lies outside the signal time span");
        }
        return static_cast<std::size_t>(rounded);
    };
    const std::size_t i = to_index(a, "interval start");
    const std::size_t k = to_index(b, "interval end");
    if (k <= i) {
        throw DomainError("interval start must precede interval end");
    }
    double sum = 0.0;
    for (std::size_t j = i; j <= k; ++j) {
        sum += signal[j] * signal[j];
    }
    return std::sqrt(sum) / rate;
}

double l1_fourier_energy(const Spectrum& spectrum) {
    double sum = 0.0;
    for (const auto& c : spectrum.coefficients) {
        sum += std::abs(c);
    }
    return sum;
}

double l1_fourier_energy(const Signal& signal) {
    return l1_fourier_energy(dft(signal));
}

double norm2_from_spectrum(std::span<const Complex> coefficients, double sample_rate) {
    double sum = 0.0;
    for (const auto& c : coefficients) {
        sum += std::norm(c);
    }
    return std::sqrt(sum / static_cast<double>(coefficients.size())) / sample_rate;
}

} // namespace imfogram::spectral
