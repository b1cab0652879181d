#include "grabqc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <numeric>

namespace grabqc {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey; a.size() must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> step(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= step;
            }
        }
    }
}

std::vector<double> power_bins_direct(std::span<const double> line) {
    const std::size_t n = line.size();
    std::vector<double> cos_table(n);
    std::vector<double> sin_table(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        cos_table[k] = std::cos(angle);
        sin_table[k] = std::sin(angle);
    }
    std::vector<double> power(n / 2 + 1);
    for (std::size_t i = 0; i <= n / 2; ++i) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t idx = (i * j) % n;
            re += line[j] * cos_table[idx];
            im += line[j] * sin_table[idx];
        }
        power[i] = re * re + im * im;
    }
    return power;
}

} // namespace

std::vector<double> line_power_spectrum(std::span<const double> line) {
    const std::size_t n = line.size();
    if (n < 4)
        throw Error(ErrorCode::line_too_short,
                    "line of " + std::to_string(n) + " samples; need at least 4");
    if (!is_power_of_two(n)) return power_bins_direct(line);

    std::vector<std::complex<double>> buffer(n);
    for (std::size_t j = 0; j < n; ++j) buffer[j] = line[j];
    fft_radix2(buffer);
    std::vector<double> power(n / 2 + 1);
    for (std::size_t i = 0; i <= n / 2; ++i) power[i] = std::norm(buffer[i]);
    return power;
}

std::vector<double> line_power_spectrum(std::span<const std::uint16_t> line) {
    std::vector<double> values(line.begin(), line.end());
    return line_power_spectrum(std::span<const double>(values));
}

std::vector<double> global_spectrum(const Frame& frame) {
    std::vector<double> global(static_cast<std::size_t>(frame.width()) / 2 + 1, 0.0);
    for (int i = 0; i < frame.height(); ++i) {
        const std::vector<double> power = line_power_spectrum(frame.line(i));
        for (std::size_t b = 0; b < global.size(); ++b) global[b] += power[b];
    }
    return global;
}

double spectrum_mean(const std::vector<double>& global_power) {
    if (global_power.size() < 2)
        throw Error(ErrorCode::invalid_argument, "spectrum has no non-DC bins");
    const double sum =
        std::accumulate(global_power.begin() + 1, global_power.end(), 0.0);
    return sum / static_cast<double>(global_power.size() - 1);
}

std::vector<DominantFrequency> dominant_frequencies(const std::vector<double>& global_power,
                                                    double dominance_factor, int width) {
    if (!(dominance_factor > 1.0))
        throw Error(ErrorCode::invalid_argument, "dominance factor must exceed 1");
    if (width < 2 || global_power.size() != static_cast<std::size_t>(width) / 2 + 1)
        throw Error(ErrorCode::invalid_argument, "spectrum length does not match line length");

    const double mean = spectrum_mean(global_power);
    // Bins this far below the strongest one are FFT roundoff, not signal;
    // without the floor an all-constant frame could flag dust as dominant.
    const double floor =
        *std::max_element(global_power.begin(), global_power.end()) * 1e-12;

    std::vector<DominantFrequency> dominant;
    for (std::size_t i = 1; i < global_power.size(); ++i) {
        if (global_power[i] > dominance_factor * mean && global_power[i] > floor) {
            DominantFrequency entry;
            entry.bin = static_cast<int>(i);
            entry.freq_fraction = static_cast<double>(i) / width;
            entry.power = global_power[i];
            dominant.push_back(entry);
        }
    }
    if (!dominant.empty()) {
        const double strongest =
            std::max_element(dominant.begin(), dominant.end(),
                             [](const auto& a, const auto& b) { return a.power < b.power; })
                ->power;
        for (auto& entry : dominant)
            entry.power_ratio_percent = 100.0 * entry.power / strongest;
    }
    return dominant;
}

SpectrumReport spectrum_report(const Frame& frame, double dominance_factor,
                               Orientation orientation) {
    if (orientation == Orientation::columns) {
        SpectrumReport report =
            spectrum_report(transposed(frame), dominance_factor, Orientation::rows);
        report.orientation = Orientation::columns;
        return report;
    }
    SpectrumReport report;
    report.line_length = frame.width();
    report.orientation = Orientation::rows;
    report.global_power = global_spectrum(frame);
    report.mean_power = spectrum_mean(report.global_power);
    report.dominance_factor = dominance_factor;
    report.dominant =
        dominant_frequencies(report.global_power, dominance_factor, frame.width());
    return report;
}

std::string format_dominant(const std::vector<DominantFrequency>& dominant) {
    if (dominant.empty()) return "-";
    std::string out;
    for (const auto& entry : dominant) {
        if (!out.empty()) out.push_back(' ');
        // bin/width reduced: 32/256 prints as fs/8, 3*width/4 would be 3fs/4.
        const int width = static_cast<int>(std::lround(entry.bin / entry.freq_fraction));
        const int g = std::gcd(entry.bin, width);
        const int num = entry.bin / g;
        const int den = width / g;
        char buf[64];
        if (num == 1)
            std::snprintf(buf, sizeof buf, "fs/%d-%.10g%%", den, entry.power_ratio_percent);
        else
            std::snprintf(buf, sizeof buf, "%dfs/%d-%.10g%%", num, den, entry.power_ratio_percent);
        out += buf;
    }
    return out;
}

} // namespace grabqc
