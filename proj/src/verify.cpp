#include "imfogram/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "imfogram/error.hpp"
#include "imfogram/spectral.hpp"

namespace imfogram {

double ConservationReport::max_excess() const noexcept {
    double worst = 0.0;
    for (std::size_t k = 0; k < per_bin_signal_energy.size(); ++k) {
        worst = std::max(worst, per_bin_component_sum[k] - per_bin_signal_energy[k]);
    }
    return worst;
}

std::string ConservationReport::interpretation() const {
    std::ostringstream out;
    if (conserves()) {
        out << "L1 Fourier energy conserved; no unwanted oscillations";
    } else {
        out << "L1 Fourier energy not conserved: " << violations.size()
            << " bin(s) where the components carry more spectral modulus than the signal";
        if (external) {
            out << ". This shows the decomposition mixes modes in frequency and allows no "
                   "further conclusion about the method that produced it";
        }
    }
    if (reconstruction_warning) {
        out << " (warning: components do not sum to the signal)";
    }
    return out.str();
}

ConservationReport check_conservation(const Signal& signal, std::span<const Signal> components,
                                      double tolerance) {
    if (!(tolerance >= 0.0)) {
        throw InvalidInput("tolerance must be nonnegative");
    }
    const std::size_t n = signal.size();
    for (std::size_t c = 0; c < components.size(); ++c) {
        if (components[c].size() != n) {
            throw InvalidInput("component " + std::to_string(c) + " has " +
                               std::to_string(components[c].size()) + " samples, signal has " +
                               std::to_string(n));
        }
        if (components[c].sample_rate() != signal.sample_rate()) {
            throw InvalidInput("component " + std::to_string(c) + " has sample rate " +
                               std::to_string(components[c].sample_rate()) + ", signal has " +
                               std::to_string(signal.sample_rate()));
        }
    }

    ConservationReport report;
    report.tolerance = tolerance;
    report.external = true;
    const auto s_hat = spectral::forward(signal.samples());
    report.per_bin_signal_energy.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        report.per_bin_signal_energy[k] = std::abs(s_hat[k]);
    }
    report.per_bin_component_sum.assign(n, 0.0);
    std::vector<double> sum(n, 0.0);
    for (const auto& component : components) {
        const auto phi_hat = spectral::forward(component.samples());
        for (std::size_t k = 0; k < n; ++k) {
            report.per_bin_component_sum[k] += std::abs(phi_hat[k]);
            sum[k] += component[k];
        }
    }

    double residual = 0.0;
    double norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        residual += (signal[j] - sum[j]) * (signal[j] - sum[j]);
        norm += signal[j] * signal[j];
    }
    report.reconstruction_error = norm > 0.0 ? std::sqrt(residual / norm) : std::sqrt(residual);
    report.reconstruction_warning = report.reconstruction_error > kReconstructionWarning;

    const double peak = *std::max_element(report.per_bin_signal_energy.begin(),
                                          report.per_bin_signal_energy.end());
    report.slack = tolerance * peak;
    for (std::size_t k = 0; k < n; ++k) {
        report.total_signal_energy += report.per_bin_signal_energy[k];
        report.total_component_energy += report.per_bin_component_sum[k];
        const double excess = report.per_bin_component_sum[k] - report.per_bin_signal_energy[k];
        if (excess > report.slack) {
            report.violations.push_back({k, excess});
        }
    }
    const double gap = std::abs(report.total_component_energy - report.total_signal_energy);
    report.relative_error = report.total_signal_energy > 0.0 ? gap / report.total_signal_energy : gap;
    return report;
}

ConservationReport check_conservation(const Signal& signal, const ImfSet& imf_set, double tolerance) {
    std::vector<Signal> components;
    components.reserve(imf_set.imfs.size() + 1);
    components.push_back(imf_set.trend);
    components.insert(components.end(), imf_set.imfs.begin(), imf_set.imfs.end());
    auto report = check_conservation(signal, components, tolerance);
    report.external = imf_set.meta.empty() && !imf_set.imfs.empty();
    return report;
}

MultiplierTrace record_multipliers(const ImfSet& imf_set) {
    if (imf_set.meta.size() != imf_set.imfs.size()) {
        throw UnsupportedOperation("multipliers are only available for decompositions run by this library");
    }
    const std::size_t n = imf_set.trend.size();
    for (const auto& meta : imf_set.meta) {
        if (meta.multiplier.size() != n) {
            throw UnsupportedOperation(
                "multipliers are unavailable for runs with boundary extension");
        }
    }
    MultiplierTrace trace;
    trace.factors.reserve(imf_set.imfs.size() + 1);
    std::vector<double> leftover(n, 1.0);
    trace.factors.emplace_back(); // trend, filled below
    for (const auto& meta : imf_set.meta) {
        std::vector<double> f(n);
        for (std::size_t k = 0; k < n; ++k) {
            f[k] = meta.multiplier[k] * leftover[k];
            leftover[k] *= 1.0 - meta.multiplier[k];
        }
        trace.factors.push_back(std::move(f));
    }
    trace.factors[0] = std::move(leftover);
    return trace;
}

std::string report_to_csv(const ConservationReport& report) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "bin,signal_modulus,component_sum,excess\n";
    for (std::size_t k = 0; k < report.per_bin_signal_energy.size(); ++k) {
        const double s = report.per_bin_signal_energy[k];
        const double c = report.per_bin_component_sum[k];
        out << k << ',' << s << ',' << c << ',' << (c - s) << '\n';
    }
    return out.str();
}

std::string report_summary_json(const ConservationReport& report) {
    nlohmann::ordered_json j;
    j["status"] = report.conserves() ? "OK" : "VIOLATION";
    j["relative_error"] = report.relative_error;
    j["tolerance"] = report.tolerance;
    j["violations"] = report.violations.size();
    j["max_excess"] = report.max_excess();
    j["signal_energy"] = report.total_signal_energy;
    j["component_energy"] = report.total_component_energy;
    j["reconstruction_error"] = report.reconstruction_error;
    j["message"] = report.interpretation();
    return j.dump();
}

} // namespace imfogram
