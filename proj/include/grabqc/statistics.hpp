#pragma once

#include <cstdint>
#include <vector>

#include "grabqc/frame.hpp"

namespace grabqc {

/// Internal-noise figures, all in LSB. abs_mean <= rms <= max always holds.
struct NoiseReport {
    double mean_level = 0.0;     // M
    double abs_mean_noise = 0.0; // Na
    double max_noise = 0.0;      // Nmax
    double rms_noise = 0.0;      // Nms
};

struct Histogram {
    int bit_depth = 8;
    std::vector<std::uint64_t> counts; // index = grey code

    std::uint64_t total() const;
};

struct PeakWidth {
    int peak_code = 0;
    int width = 0; // 2w+1 codes of the smallest symmetric mass interval
};

struct AdcReport {
    std::vector<int> missing_codes; // sorted ascending
    double effective_resolution_bits = 0.0;
    Histogram histogram;
};

double mean_level(const Frame& frame);
NoiseReport noise_metrics(const Frame& frame);
Histogram build_histogram(const Frame& frame);

/// Smallest symmetric interval around the histogram's peak holding at least
/// mass_fraction of the total count. Ties in the peak pick the lower code.
PeakWidth histogram_peak_width(const Histogram& histogram, double mass_fraction = 0.95);

/// Codes whose count falls below rel_threshold times the mean of their
/// neighbours' counts (single neighbour at the range ends); zero-count codes
/// are always reported. Meaningful on ramp-type captures; histograms with
/// fewer than three populated codes are rejected as unusable.
std::vector<int> find_missing_codes(const Histogram& histogram, double rel_threshold = 0.1);

/// log2 of the number of codes whose count reaches rel_threshold times the
/// ideal uniform count; equals bit_depth when nothing is missing.
double effective_resolution(const Histogram& histogram, double rel_threshold = 0.1);

AdcReport adc_report(const Frame& frame, double rel_threshold = 0.1);

} // namespace grabqc
