#include "imfogram/signal.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "imfogram/error.hpp"

namespace imfogram {

Signal::Signal(std::vector<double> samples, double sample_rate, double t0)
    : samples_(std::move(samples)), sample_rate_(sample_rate), t0_(t0) {
    if (samples_.size() < 2) {
        throw InvalidInput("signal needs at least 2 samples, got " + std::to_string(samples_.size()));
    }
    if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
        throw InvalidInput("sample rate must be positive and finite");
    }
    if (!std::isfinite(t0_)) {
        throw InvalidInput("start time must be finite");
    }
    for (std::size_t j = 0; j < samples_.size(); ++j) {
        if (!std::isfinite(samples_[j])) {
            throw InvalidInput("non-finite sample at index " + std::to_string(j));
        }
    }
}

double Signal::duration() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_;
}

double Signal::time(std::size_t j) const noexcept {
    return t0_ + static_cast<double>(j) / sample_rate_;
}

Signal Signal::with_samples(std::vector<double> samples) const {
    return Signal(std::move(samples), sample_rate_, t0_);
}

} // namespace imfogram
