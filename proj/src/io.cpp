#include "imfogram/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "imfogram/error.hpp"

namespace imfogram::io {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

std::optional<double> parse_number(std::string_view field) {
    double value = 0.0;
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end || field.empty()) {
        return std::nullopt;
    }
    return value;
}

double uniform_rate(std::span<const double> time) {
    const std::size_t n = time.size();
    if (n < 2) {
        throw InvalidInput("time column needs at least 2 rows");
    }
    const double step = (time.back() - time.front()) / static_cast<double>(n - 1);
    if (!(step > 0.0)) {
        throw InvalidInput("time column must be strictly increasing");
    }
    double jitter = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        jitter = std::max(jitter, std::abs((time[j] - time[j - 1]) - step) / step);
    }
    if (jitter > kMaxTimeJitter) {
        std::ostringstream msg;
        msg << "time column is not uniformly sampled: relative step jitter " << jitter
            << " exceeds " << kMaxTimeJitter;
        throw InvalidInput(msg.str());
    }
    return 1.0 / step;
}

template <typename T>
T read_le(std::string_view bytes, std::size_t offset) {
    if (offset + sizeof(T) > bytes.size()) {
        throw InvalidInput("truncated WAV file");
    }
    T value{};
    std::memcpy(&value, bytes.data() + offset, sizeof(T));
    return value; // host is little endian on every supported target
}

} // namespace

Table parse_csv(std::string_view text) {
    Table table;
    std::size_t line_no = 0;
    bool header_allowed = true;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const auto line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            table.comments.emplace_back(trim(line.substr(1)));
            continue;
        }
        const auto fields = split(line);
        std::vector<double> row;
        row.reserve(fields.size());
        bool numeric = true;
        for (const auto& f : fields) {
            auto v = parse_number(f);
            if (!v) {
                numeric = false;
                break;
            }
            row.push_back(*v);
        }
        if (!numeric) {
            if (header_allowed) {
                for (const auto& f : fields) {
                    table.header.emplace_back(f);
                }
                header_allowed = false;
                continue;
            }
            throw InvalidInput("non-numeric value on CSV line " + std::to_string(line_no));
        }
        header_allowed = false;
        if (table.columns.empty()) {
            table.columns.resize(row.size());
        } else if (row.size() != table.columns.size()) {
            throw InvalidInput("CSV line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                               " fields, expected " + std::to_string(table.columns.size()));
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            table.columns[c].push_back(row[c]);
        }
    }
    if (table.rows() == 0) {
        throw InvalidInput("CSV input holds no data rows");
    }
    return table;
}

Table read_csv(const std::filesystem::path& path) {
    return parse_csv(read_file(path));
}

InputFormat parse_input_format(std::string_view name) {
    if (name == "auto") {
        return InputFormat::Auto;
    }
    if (name == "csv") {
        return InputFormat::Csv;
    }
    if (name == "wav") {
        return InputFormat::Wav;
    }
    throw InvalidInput("unknown input format '" + std::string(name) + "'");
}

Signal signal_from_table(const Table& table, std::optional<double> rate) {
    if (table.columns.size() == 1) {
        if (!rate) {
            throw InvalidInput("single-column CSV needs a sample rate (--rate)");
        }
        return Signal(table.columns[0], *rate);
    }
    if (table.columns.size() == 2) {
        const double r = uniform_rate(table.columns[0]);
        return Signal(table.columns[1], r, table.columns[0].front());
    }
    throw InvalidInput("signal CSV must have one (value) or two (time,value) columns, got " +
                       std::to_string(table.columns.size()));
}

Signal parse_wav(std::string_view bytes) {
    if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") {
        throw InvalidInput("not a RIFF/WAVE file");
    }
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::uint16_t bits = 0;
    std::string_view data;
    bool have_fmt = false;
    std::size_t offset = 12;
    while (offset + 8 <= bytes.size()) {
        const auto id = bytes.substr(offset, 4);
        const auto size = read_le<std::uint32_t>(bytes, offset + 4);
        const std::size_t body = offset + 8;
        if (id == "fmt ") {
            format = read_le<std::uint16_t>(bytes, body);
            channels = read_le<std::uint16_t>(bytes, body + 2);
            rate = read_le<std::uint32_t>(bytes, body + 4);
            bits = read_le<std::uint16_t>(bytes, body + 14);
            if (format == 0xFFFE) {
                format = read_le<std::uint16_t>(bytes, body + 24); // sub-format GUID prefix
            }
            have_fmt = true;
        } else if (id == "data") {
            data = bytes.substr(body, std::min<std::size_t>(size, bytes.size() - body));
        }
        offset = body + size + (size & 1u);
    }
    if (!have_fmt) {
        throw InvalidInput("WAV file has no fmt chunk");
    }
    if (channels == 0 || rate == 0) {
        throw InvalidInput("WAV header has zero channels or zero sample rate");
    }
    const bool pcm = format == 1 && (bits == 16 || bits == 24 || bits == 32);
    const bool ieee = format == 3 && bits == 32;
    if (!pcm && !ieee) {
        throw InvalidInput("unsupported WAV encoding (format " + std::to_string(format) + ", " +
                           std::to_string(bits) + " bits)");
    }
    const std::size_t width = bits / 8;
    const std::size_t frame = width * channels;
    const std::size_t frames = data.size() / frame;
    if (frames == 0) {
        throw InvalidInput("WAV file holds no samples");
    }
    std::vector<double> samples(frames);
    for (std::size_t i = 0; i < frames; ++i) {
        const std::size_t at = i * frame;
        if (ieee) {
            samples[i] = static_cast<double>(read_le<float>(data, at));
        } else if (bits == 16) {
            samples[i] = static_cast<double>(read_le<std::int16_t>(data, at)) / 32768.0;
        } else if (bits == 24) {
            const auto b0 = static_cast<std::uint8_t>(data[at]);
            const auto b1 = static_cast<std::uint8_t>(data[at + 1]);
            const auto b2 = static_cast<std::uint8_t>(data[at + 2]);
            std::int32_t v = b0 | (b1 << 8) | (b2 << 16);
            if (v & 0x800000) {
                v -= 0x1000000;
            }
            samples[i] = static_cast<double>(v) / 8388608.0;
        } else {
            samples[i] = static_cast<double>(read_le<std::int32_t>(data, at)) / 2147483648.0;
        }
    }
    return Signal(std::move(samples), static_cast<double>(rate));
}

Signal ingest(const std::filesystem::path& path, InputFormat format, std::optional<double> rate) {
    if (format == InputFormat::Auto) {
        auto ext = path.extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        format = ext == ".wav" ? InputFormat::Wav : InputFormat::Csv;
    }
    const auto bytes = read_file(path);
    if (bytes.empty()) {
        throw InvalidInput("input file " + path.string() + " is empty");
    }
    if (format == InputFormat::Wav) {
        return parse_wav(bytes);
    }
    return signal_from_table(parse_csv(bytes), rate);
}

std::string format_number(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::string signal_to_csv(const Signal& signal) {
    std::string out = "time,value\n";
    for (std::size_t j = 0; j < signal.size(); ++j) {
        out += format_number(signal.time(j));
        out += ',';
        out += format_number(signal[j]);
        out += '\n';
    }
    return out;
}

std::string imf_set_to_csv(const ImfSet& imf_set) {
    std::string out;
    const auto& cfg = imf_set.config;
    out += "# delta=" + format_number(cfg.delta) + "\n";
    out += "# chi=" + format_number(cfg.chi) + "\n";
    out += "# filter_family=" + std::string(to_string(cfg.filter_family)) + "\n";
    out += "# filter_mode=" + std::string(to_string(cfg.filter_mode)) + "\n";
    out += "# extension=" + std::string(to_string(cfg.extension)) + "\n";
    out += "# length_strategy=" + std::string(to_string(cfg.length_strategy)) + "\n";
    out += "# stop_reason=" + std::string(to_string(imf_set.stop_reason)) + "\n";
    for (std::size_t k = 0; k < imf_set.meta.size(); ++k) {
        const auto& m = imf_set.meta[k];
        out += "# imf_" + std::to_string(k + 1) + " filter_length=" + std::to_string(m.filter_length) +
               " iterations=" + std::to_string(m.iterations) +
               (m.reached_max_iterations ? " max_iterations_reached" : "") + "\n";
    }
    out += "time";
    for (std::size_t k = 0; k < imf_set.imfs.size(); ++k) {
        out += ",imf_" + std::to_string(k + 1);
    }
    out += ",trend\n";
    const auto& trend = imf_set.trend;
    for (std::size_t j = 0; j < trend.size(); ++j) {
        out += format_number(trend.time(j));
        for (const auto& imf : imf_set.imfs) {
            out += ',';
            out += format_number(imf[j]);
        }
        out += ',';
        out += format_number(trend[j]);
        out += '\n';
    }
    return out;
}

std::vector<Signal> components_from_table(const Table& table, std::optional<double> rate) {
    if (table.columns.size() < 2) {
        throw InvalidInput("decomposition CSV needs a time column and at least one component");
    }
    const double r = rate ? *rate : uniform_rate(table.columns[0]);
    const double t0 = table.columns[0].front();
    std::vector<Signal> out;
    for (std::size_t c = 1; c < table.columns.size(); ++c) {
        out.emplace_back(table.columns[c], r, t0);
    }
    return out;
}

ImfSet imf_set_from_table(const Table& table, std::optional<double> rate) {
    auto components = components_from_table(table, rate);
    Signal trend = components.back();
    components.pop_back();
    ImfSet set{std::move(components), std::move(trend), {}, StopReason::NoExtrema, FifConfig{}};
    return set;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

} // namespace imfogram::io
