#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "grabqc/frame.hpp"

namespace grabqc {

enum class Orientation { rows, columns };

struct DominantFrequency {
    int bin = 0;
    double freq_fraction = 0.0;       // bin / line length, cycles per pixel (fraction of fs)
    double power = 0.0;               // aggregated |X|^2 at this bin
    double power_ratio_percent = 0.0; // 100 at the strongest dominant bin
};

struct SpectrumReport {
    int line_length = 0;
    Orientation orientation = Orientation::rows;
    std::vector<double> global_power; // Fg(i), i = 0..floor(W/2)
    double mean_power = 0.0;          // Mf over bins 1..floor(W/2); DC excluded
    double dominance_factor = 5.0;
    std::vector<DominantFrequency> dominant; // sorted by bin
};

/// Squared magnitudes of the unnormalised forward DFT of one line, bins
/// 0..floor(n/2). No window is applied. Radix-2 FFT for power-of-two
/// lengths, direct evaluation otherwise; either way the result is the
/// plain periodogram of the raw samples.
std::vector<double> line_power_spectrum(std::span<const double> line);
std::vector<double> line_power_spectrum(std::span<const std::uint16_t> line);

/// Fg(i): per-bin power summed over all lines, in line order.
std::vector<double> global_spectrum(const Frame& frame);

/// Mf: mean of Fg over bins 1..floor(W/2). DC would swamp the average with
/// the grey level itself, so it stays out.
double spectrum_mean(const std::vector<double>& global_power);

/// Bins whose power exceeds dominance_factor * Mf. The strongest dominant
/// bin normalises the percentage column; bin 0 never qualifies. `width` is
/// the analyzed line length, needed to express bins as fractions of fs.
std::vector<DominantFrequency> dominant_frequencies(const std::vector<double>& global_power,
                                                    double dominance_factor, int width);

SpectrumReport spectrum_report(const Frame& frame, double dominance_factor = 5.0,
                               Orientation orientation = Orientation::rows);

/// Table-style rendering: "fs/8-75.5% fs/4-80% fs/2-100%", or "-" when the
/// list is empty.
std::string format_dominant(const std::vector<DominantFrequency>& dominant);

} // namespace grabqc
