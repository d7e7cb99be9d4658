#include <imfogram/error.hpp>
#include <imfogram/fif.hpp>
#include <imfogram/signals.hpp>
#include <imfogram/spectral.hpp>
#include <imfogram/tfr.hpp>
#include <imfogram/verify.hpp>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace imfogram;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Signal to_signal(const Array& samples, double sample_rate, double t0 = 0.0) {
    if (samples.ndim() != 1) {
        throw InvalidInput("samples must be a one-dimensional array");
    }
    const double* p = samples.data();
    return Signal(std::vector<double>(p, p + samples.size()), sample_rate, t0);
}

Array to_array(const std::vector<double>& v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Array stack(const std::vector<Signal>& rows, std::size_t n) {
    Array out({static_cast<py::ssize_t>(rows.size()), static_cast<py::ssize_t>(n)});
    double* p = out.mutable_data();
    for (const auto& row : rows) {
        p = std::copy(row.values().begin(), row.values().end(), p);
    }
    return out;
}

Array matrix_values(const TfrMatrix& m) {
    Array out({static_cast<py::ssize_t>(m.rows), static_cast<py::ssize_t>(m.cols)});
    std::copy(m.values.begin(), m.values.end(), out.mutable_data());
    return out;
}

FifConfig make_config(double delta, double chi, std::size_t max_imfs, std::size_t max_inner_iterations,
                      const std::string& extension, const std::string& filter_family,
                      const std::string& filter_mode, const std::string& length_strategy) {
    FifConfig cfg;
    cfg.delta = delta;
    cfg.chi = chi;
    cfg.max_imfs = max_imfs;
    cfg.max_inner_iterations = max_inner_iterations;
    cfg.extension = parse_extension_mode(extension);
    cfg.filter_family = parse_filter_family(filter_family);
    cfg.filter_mode = parse_filter_mode(filter_mode);
    cfg.length_strategy = parse_length_strategy(length_strategy);
    cfg.validate();
    return cfg;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fast Iterative Filtering and the IMFogram";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<UnsupportedOperation>(m, "UnsupportedOperation", base.ptr());

    py::class_<FifConfig>(m, "FifConfig")
        .def(py::init(&make_config), py::arg("delta") = 1e-3, py::arg("chi") = 1.6, py::arg("max_imfs") = 50,
             py::arg("max_inner_iterations") = 200, py::arg("extension") = "none", py::arg("filter_family") = "bump",
             py::arg("filter_mode") = "double", py::arg("length_strategy") = "extrema")
        .def_readonly("delta", &FifConfig::delta)
        .def_readonly("chi", &FifConfig::chi)
        .def_readonly("max_imfs", &FifConfig::max_imfs)
        .def_readonly("max_inner_iterations", &FifConfig::max_inner_iterations)
        .def_property_readonly("extension", [](const FifConfig& c) { return std::string(to_string(c.extension)); })
        .def_property_readonly("filter_family",
                               [](const FifConfig& c) { return std::string(to_string(c.filter_family)); })
        .def_property_readonly("filter_mode", [](const FifConfig& c) { return std::string(to_string(c.filter_mode)); })
        .def_property_readonly("length_strategy",
                               [](const FifConfig& c) { return std::string(to_string(c.length_strategy)); });

    py::class_<ImfSet>(m, "ImfSet")
        .def_property_readonly("imfs", [](const ImfSet& s) { return stack(s.imfs, s.trend.size()); })
        .def_property_readonly("trend", [](const ImfSet& s) { return to_array(s.trend.values()); })
        .def_property_readonly("sample_rate", [](const ImfSet& s) { return s.trend.sample_rate(); })
        .def_property_readonly("stop_reason", [](const ImfSet& s) { return std::string(to_string(s.stop_reason)); })
        .def_property_readonly("filter_lengths",
                               [](const ImfSet& s) {
                                   std::vector<std::size_t> out;
                                   for (const auto& meta : s.meta) {
                                       out.push_back(meta.filter_length);
                                   }
                                   return out;
                               })
        .def_property_readonly("iterations",
                               [](const ImfSet& s) {
                                   std::vector<std::size_t> out;
                                   for (const auto& meta : s.meta) {
                                       out.push_back(meta.iterations);
                                   }
                                   return out;
                               })
        .def("__len__", [](const ImfSet& s) { return s.imfs.size(); })
        .def("reconstruct", [](const ImfSet& s) { return to_array(reconstruct(s).values()); });

    py::class_<TfrMatrix>(m, "TfrMatrix")
        .def_property_readonly("values", &matrix_values)
        .def_property_readonly("freq_axis", [](const TfrMatrix& t) { return to_array(t.freq_axis); })
        .def_property_readonly("time_axis", [](const TfrMatrix& t) { return to_array(t.time_axis); })
        .def_readonly("window_length", &TfrMatrix::window_length)
        .def_readonly("hop", &TfrMatrix::hop)
        .def_readonly("clamped_above_nyquist", &TfrMatrix::clamped_above_nyquist)
        .def_property_readonly("shape", [](const TfrMatrix& t) { return py::make_tuple(t.rows, t.cols); });

    py::class_<ConservationReport>(m, "ConservationReport")
        .def_property_readonly("per_bin_signal_energy",
                               [](const ConservationReport& r) { return to_array(r.per_bin_signal_energy); })
        .def_property_readonly("per_bin_component_sum",
                               [](const ConservationReport& r) { return to_array(r.per_bin_component_sum); })
        .def_property_readonly("violating_bins",
                               [](const ConservationReport& r) {
                                   std::vector<std::size_t> out;
                                   for (const auto& v : r.violations) {
                                       out.push_back(v.bin);
                                   }
                                   return out;
                               })
        .def_readonly("total_signal_energy", &ConservationReport::total_signal_energy)
        .def_readonly("total_component_energy", &ConservationReport::total_component_energy)
        .def_readonly("relative_error", &ConservationReport::relative_error)
        .def_readonly("reconstruction_error", &ConservationReport::reconstruction_error)
        .def_readonly("external", &ConservationReport::external)
        .def_property_readonly("conserves", &ConservationReport::conserves)
        .def_property_readonly("max_excess", &ConservationReport::max_excess)
        .def("interpretation", &ConservationReport::interpretation)
        .def("to_json", [](const ConservationReport& r) { return report_summary_json(r); });

    py::class_<PiecewiseImfogram>(m, "PiecewiseImfogram")
        .def_readonly("matrix", &PiecewiseImfogram::matrix)
        .def_readonly("decompositions", &PiecewiseImfogram::decompositions);

    m.def(
        "decompose",
        [](const Array& samples, double sample_rate, const FifConfig& config) {
            const Signal s = to_signal(samples, sample_rate);
            py::gil_scoped_release release;
            return decompose(s, config);
        },
        py::arg("samples"), py::arg("sample_rate") = 1.0, py::arg("config") = FifConfig{},
        "Decompose a uniformly sampled signal into IMFs and a trend.");

    m.def(
        "check_conservation",
        [](const Array& samples, double sample_rate, const ImfSet& imf_set, double tolerance) {
            return check_conservation(to_signal(samples, sample_rate), imf_set, tolerance);
        },
        py::arg("samples"), py::arg("sample_rate"), py::arg("imf_set"),
        py::arg("tolerance") = kDefaultConservationTolerance);

    m.def(
        "check_components",
        [](const Array& samples, double sample_rate, const std::vector<Array>& components, double tolerance) {
            std::vector<Signal> parts;
            for (const auto& c : components) {
                parts.push_back(to_signal(c, sample_rate));
            }
            return check_conservation(to_signal(samples, sample_rate), parts, tolerance);
        },
        py::arg("samples"), py::arg("sample_rate"), py::arg("components"),
        py::arg("tolerance") = kDefaultConservationTolerance,
        "Conservation check for an arbitrary decomposition given as a list of arrays.");

    m.def(
        "imfogram",
        [](const ImfSet& imf_set, std::size_t window_length, std::size_t hop, std::size_t n_freq_bins,
           unsigned threads) {
            py::gil_scoped_release release;
            return imfogram::imfogram(imf_set, AveragingWindows{window_length, hop}, n_freq_bins, threads);
        },
        py::arg("imf_set"), py::arg("window_length"), py::arg("hop"), py::arg("n_freq_bins"), py::arg("threads") = 1);

    m.def(
        "piecewise_imfogram",
        [](const Array& samples, double sample_rate, std::size_t window_samples, std::size_t n_freq_bins,
           const FifConfig& config, unsigned threads) {
            const Signal s = to_signal(samples, sample_rate);
            py::gil_scoped_release release;
            return piecewise_imfogram(s, window_samples, n_freq_bins, config, threads);
        },
        py::arg("samples"), py::arg("sample_rate"), py::arg("window_samples"), py::arg("n_freq_bins"),
        py::arg("config") = FifConfig{}, py::arg("threads") = 1);

    m.def(
        "spectrogram",
        [](const Array& samples, double sample_rate, std::size_t window_samples, std::size_t hop_samples) {
            return spectrogram(to_signal(samples, sample_rate), window_samples, hop_samples);
        },
        py::arg("samples"), py::arg("sample_rate"), py::arg("window_samples"), py::arg("hop_samples"));

    m.def(
        "periodogram",
        [](const Array& samples, double sample_rate) { return periodogram(to_signal(samples, sample_rate)); },
        py::arg("samples"), py::arg("sample_rate"));

    m.def("hadamard_square", &hadamard_square, py::arg("matrix"));
    m.def(
        "compare_tfr", [](const TfrMatrix& a, const TfrMatrix& b) { return compare_tfr(a, b); }, py::arg("a"),
        py::arg("b"));

    m.def(
        "instantaneous_amplitude",
        [](const Array& imf, double sample_rate) {
            return to_array(instantaneous_amplitude(to_signal(imf, sample_rate)).values);
        },
        py::arg("imf"), py::arg("sample_rate"));
    m.def(
        "instantaneous_frequency",
        [](const Array& imf, double sample_rate) {
            return to_array(instantaneous_frequency(to_signal(imf, sample_rate)).values);
        },
        py::arg("imf"), py::arg("sample_rate"));

    m.def(
        "norm2", [](const Array& samples, double sample_rate) { return spectral::norm2(to_signal(samples, sample_rate)); },
        py::arg("samples"), py::arg("sample_rate"));
    m.def(
        "l1_fourier_energy",
        [](const Array& samples, double sample_rate) {
            return spectral::l1_fourier_energy(to_signal(samples, sample_rate));
        },
        py::arg("samples"), py::arg("sample_rate"));

    m.def(
        "chirp_pair", [](std::size_t n, double rate) { return to_array(signals::chirp_pair(n, rate).values()); },
        py::arg("n"), py::arg("sample_rate"));
    m.def(
        "fast_chirp", [](std::size_t n, double rate) { return to_array(signals::fast_chirp(n, rate).values()); },
        py::arg("n"), py::arg("sample_rate"));
    m.def(
        "noisy_triple",
        [](std::size_t n, double rate, std::uint64_t seed, double sigma) {
            return to_array(signals::noisy_triple(n, rate, seed, sigma).values());
        },
        py::arg("n"), py::arg("sample_rate"), py::arg("seed"), py::arg("noise_sigma") = 0.18);
    m.def(
        "duffing_velocity",
        [](std::size_t n, double rate, double alpha, double beta, double gamma, double omega, double x0, double v0) {
            return to_array(
                signals::duffing_velocity(n, rate, signals::DuffingParameters{alpha, beta, gamma, omega, x0, v0})
                    .values());
        },
        py::arg("n"), py::arg("sample_rate"), py::arg("alpha") = -1.0, py::arg("beta") = 1.0,
        py::arg("gamma") = 0.1, py::arg("omega") = 1.0, py::arg("x0") = 1.0, py::arg("v0") = 0.0);
}
