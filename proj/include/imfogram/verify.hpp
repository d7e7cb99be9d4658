#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "imfogram/fif.hpp"
#include "imfogram/signal.hpp"

namespace imfogram {

struct Violation {
    std::size_t bin;
    double excess; // sum_k |phi_hat_k| - |s_hat| at this bin
};

/// Per-frequency comparison of sum_k |phi_hat_k(xi)| against |s_hat(xi)|.
struct ConservationReport {
    std::vector<double> per_bin_signal_energy;
    std::vector<double> per_bin_component_sum;
    std::vector<Violation> violations;
    double total_signal_energy = 0.0;
    double total_component_energy = 0.0;
    double relative_error = 0.0;
    double tolerance = 0.0;
    double slack = 0.0;                // absolute per-bin allowance, tolerance * max |s_hat|
    double reconstruction_error = 0.0; // ||s - sum phi_k|| / ||s||
    bool reconstruction_warning = false;
    bool external = false;             // components did not come from this library's FIF

    [[nodiscard]] bool conserves() const noexcept {
        return violations.empty() && relative_error <= tolerance;
    }
    [[nodiscard]] double max_excess() const noexcept;
    /// One-line human reading of the result.
    [[nodiscard]] std::string interpretation() const;
};

inline constexpr double kDefaultConservationTolerance = 1e-10;
inline constexpr double kReconstructionWarning = 1e-8;

/// Works for any decomposition s = sum_k phi_k; the report is marked
/// external. Components must match the signal's length and sample rate
/// (InvalidInput otherwise). A reconstruction error above
/// 1e-8 relative is flagged but the report is still produced.
ConservationReport check_conservation(const Signal& signal, std::span<const Signal> components,
                                      double tolerance = kDefaultConservationTolerance);

/// Components are the trend (index 0) followed by the IMFs.
ConservationReport check_conservation(const Signal& signal, const ImfSet& imf_set,
                                      double tolerance = kDefaultConservationTolerance);

/// f_k(xi) for k = 0..m where f_0 is the trend's multiplier, so that
/// IMF_hat_k = f_k * s_hat and trend_hat = f_0 * s_hat.
struct MultiplierTrace {
    std::vector<std::vector<double>> factors; // factors[0] = trend, factors[k] = IMF k
};

/// Rebuilds f_k from the per-IMF (1 - w_hat_k)^{p_k} recorded by decompose:
/// f_k = q_k prod_{j<k} (1 - q_j) and f_0 = prod_j (1 - q_j).
/// Throws UnsupportedOperation for decompositions without run metadata or
/// produced with boundary extension (the multipliers then live on other grids).
MultiplierTrace record_multipliers(const ImfSet& imf_set);

/// Report as CSV rows: bin,signal_modulus,component_sum,excess.
std::string report_to_csv(const ConservationReport& report);

/// Compact one-line JSON summary.
std::string report_summary_json(const ConservationReport& report);

} // namespace imfogram
