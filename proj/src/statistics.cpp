#include "grabqc/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace grabqc {

std::uint64_t Histogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

double mean_level(const Frame& frame) {
    std::uint64_t sum = 0;
    for (std::uint16_t s : frame.samples()) sum += s;
    return static_cast<double>(sum) / static_cast<double>(frame.pixel_count());
}

NoiseReport noise_metrics(const Frame& frame) {
    NoiseReport report;
    report.mean_level = mean_level(frame);

    double abs_sum = 0.0;
    double sq_sum = 0.0;
    double max_dev = 0.0;
    for (std::uint16_t s : frame.samples()) {
        const double d = s - report.mean_level;
        abs_sum += std::abs(d);
        sq_sum += d * d;
        max_dev = std::max(max_dev, std::abs(d));
    }
    const double n = static_cast<double>(frame.pixel_count());
    report.abs_mean_noise = abs_sum / n;
    report.rms_noise = std::sqrt(sq_sum / n);
    report.max_noise = max_dev;
    return report;
}

Histogram build_histogram(const Frame& frame) {
    Histogram histogram;
    histogram.bit_depth = frame.bit_depth();
    histogram.counts.assign(std::size_t{1} << frame.bit_depth(), 0);
    for (std::uint16_t s : frame.samples()) ++histogram.counts[s];
    return histogram;
}

PeakWidth histogram_peak_width(const Histogram& histogram, double mass_fraction) {
    if (!(mass_fraction > 0.0 && mass_fraction < 1.0))
        throw Error(ErrorCode::invalid_argument, "mass fraction must be in (0,1)");
    const std::uint64_t total = histogram.total();
    if (total == 0)
        throw Error(ErrorCode::all_zero_histogram, "histogram holds no samples");

    const auto peak_it = std::max_element(histogram.counts.begin(), histogram.counts.end());
    const int peak = static_cast<int>(peak_it - histogram.counts.begin());
    const int last = static_cast<int>(histogram.counts.size()) - 1;

    const double needed = mass_fraction * static_cast<double>(total);
    std::uint64_t mass = histogram.counts[peak];
    int w = 0;
    while (static_cast<double>(mass) < needed) {
        ++w;
        const int lo = peak - w;
        const int hi = peak + w;
        if (lo >= 0) mass += histogram.counts[lo];
        if (hi <= last) mass += histogram.counts[hi];
    }
    return {peak, 2 * w + 1};
}

namespace {

void require_usable(const Histogram& histogram) {
    const auto populated =
        std::count_if(histogram.counts.begin(), histogram.counts.end(),
                      [](std::uint64_t c) { return c > 0; });
    if (populated < 3)
        throw Error(ErrorCode::degenerate_histogram,
                    "only " + std::to_string(populated) +
                        " populated codes; need a ramp-type capture");
}

} // namespace

std::vector<int> find_missing_codes(const Histogram& histogram, double rel_threshold) {
    if (!(rel_threshold >= 0.0 && rel_threshold < 1.0))
        throw Error(ErrorCode::invalid_argument, "relative threshold must be in [0,1)");
    require_usable(histogram);

    const int last = static_cast<int>(histogram.counts.size()) - 1;
    std::vector<int> missing;
    for (int c = 0; c <= last; ++c) {
        if (histogram.counts[c] == 0) {
            missing.push_back(c);
            continue;
        }
        double neighbour_mean;
        if (c == 0)
            neighbour_mean = static_cast<double>(histogram.counts[1]);
        else if (c == last)
            neighbour_mean = static_cast<double>(histogram.counts[last - 1]);
        else
            neighbour_mean =
                0.5 * (static_cast<double>(histogram.counts[c - 1]) +
                       static_cast<double>(histogram.counts[c + 1]));
        if (static_cast<double>(histogram.counts[c]) < rel_threshold * neighbour_mean)
            missing.push_back(c);
    }
    return missing;
}

double effective_resolution(const Histogram& histogram, double rel_threshold) {
    if (!(rel_threshold >= 0.0 && rel_threshold < 1.0))
        throw Error(ErrorCode::invalid_argument, "relative threshold must be in [0,1)");
    require_usable(histogram);

    const double ideal = static_cast<double>(histogram.total()) /
                         static_cast<double>(histogram.counts.size());
    const auto qualifying = std::count_if(
        histogram.counts.begin(), histogram.counts.end(),
        [&](std::uint64_t c) { return static_cast<double>(c) >= rel_threshold * ideal; });
    return std::log2(static_cast<double>(qualifying));
}

AdcReport adc_report(const Frame& frame, double rel_threshold) {
    AdcReport report;
    report.histogram = build_histogram(frame);
    report.missing_codes = find_missing_codes(report.histogram, rel_threshold);
    report.effective_resolution_bits = effective_resolution(report.histogram, rel_threshold);
    return report;
}

} // namespace grabqc
