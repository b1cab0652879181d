#include "grabqc/analog.hpp"

#include <algorithm>
#include <cmath>

#include "grabqc/statistics.hpp"

namespace grabqc {

BlockMeanMap block_means(const Frame& frame, int block_size) {
    if (block_size < 1)
        throw Error(ErrorCode::invalid_argument, "block size must be >= 1");
    if (frame.width() < block_size || frame.height() < block_size)
        throw Error(ErrorCode::frame_smaller_than_block,
                    "frame " + std::to_string(frame.width()) + "x" +
                        std::to_string(frame.height()) + " smaller than block " +
                        std::to_string(block_size));

    BlockMeanMap map;
    map.block_size = block_size;
    map.rows = frame.height() / block_size;
    map.cols = frame.width() / block_size;
    map.means.resize(static_cast<std::size_t>(map.rows) * map.cols);

    const double denom = static_cast<double>(block_size) * block_size;
    for (int m = 0; m < map.rows; ++m) {
        for (int n = 0; n < map.cols; ++n) {
            std::uint64_t sum = 0;
            for (int i = 0; i < block_size; ++i)
                for (int j = 0; j < block_size; ++j)
                    sum += frame.at(m * block_size + i, n * block_size + j);
            map.means[static_cast<std::size_t>(m) * map.cols + n] =
                static_cast<double>(sum) / denom;
        }
    }
    return map;
}

LevelStability level_stability(const Frame& frame) {
    LevelStability result;
    result.line_means.resize(frame.height());
    for (int i = 0; i < frame.height(); ++i) {
        std::uint64_t sum = 0;
        for (std::uint16_t s : frame.line(i)) sum += s;
        result.line_means[i] = static_cast<double>(sum) / frame.width();
    }

    double max_step = 0.0;
    for (int i = 0; i + 1 < frame.height(); ++i)
        max_step = std::max(max_step, std::abs(result.line_means[i + 1] - result.line_means[i]));
    result.line_stability_lsb = max_step;

    const auto [lo, hi] = std::minmax_element(result.line_means.begin(), result.line_means.end());
    result.variation_percent = (*hi - *lo) / static_cast<double>(frame.max_code()) * 100.0;
    return result;
}

double level_decay(const Frame& frame) {
    const int w = frame.width();
    const int h = frame.height();
    std::vector<double> column_means(w);
    for (int j = 0; j < w; ++j) {
        std::uint64_t sum = 0;
        for (int i = 0; i < h; ++i) sum += frame.at(i, j);
        column_means[j] = static_cast<double>(sum) / h;
    }

    const double x_mean = (w - 1) / 2.0;
    double y_mean = 0.0;
    for (double y : column_means) y_mean += y;
    y_mean /= w;

    double num = 0.0;
    double den = 0.0;
    for (int j = 0; j < w; ++j) {
        const double dx = j - x_mean;
        num += dx * (column_means[j] - y_mean);
        den += dx * dx;
    }
    return num / den * (w - 1);
}

Plateaus detect_plateaus(const Frame& frame) {
    const Histogram histogram = build_histogram(frame);
    const double mean = mean_level(frame);

    int low = -1;
    int high = -1;
    std::uint64_t low_count = 0;
    std::uint64_t high_count = 0;
    for (std::size_t c = 0; c < histogram.counts.size(); ++c) {
        const std::uint64_t count = histogram.counts[c];
        if (count == 0) continue;
        if (static_cast<double>(c) < mean && count > low_count) {
            low = static_cast<int>(c);
            low_count = count;
        } else if (static_cast<double>(c) > mean && count > high_count) {
            high = static_cast<int>(c);
            high_count = count;
        }
    }
    if (low < 0 || high < 0)
        throw Error(ErrorCode::not_bimodal,
                    "no two-level structure around the mean; expected a bars-type capture");
    return {low, high};
}

EdgeTiming edge_timing(const Frame& frame, double low_frac, double high_frac) {
    if (!(low_frac > 0.0 && low_frac < high_frac && high_frac < 1.0))
        throw Error(ErrorCode::invalid_argument, "need 0 < low_frac < high_frac < 1");

    const Plateaus plateaus = detect_plateaus(frame);
    const double swing = plateaus.high - plateaus.low;
    const double threshold_low = plateaus.low + low_frac * swing;
    const double threshold_high = plateaus.low + high_frac * swing;

    EdgeTiming timing;
    timing.low_plateau = plateaus.low;
    timing.high_plateau = plateaus.high;

    enum class Level { low, high };
    for (int i = 0; i < frame.height(); ++i) {
        const auto line = frame.line(i);
        bool have_level = false;
        Level level = Level::low;
        int mid_run = 0;
        for (std::uint16_t s : line) {
            if (s > threshold_low && s < threshold_high) {
                ++mid_run;
                continue;
            }
            const Level here = s >= threshold_high ? Level::high : Level::low;
            if (have_level && here != level) {
                if (here == Level::high)
                    timing.rise_times.push_back(mid_run);
                else
                    timing.fall_times.push_back(mid_run);
            }
            have_level = true;
            level = here;
            mid_run = 0;
        }
    }
    return timing;
}

AnalogReport analog_report(const Frame& frame, int block_size) {
    AnalogReport report;
    const LevelStability stability = level_stability(frame);
    report.line_means = stability.line_means;
    report.line_stability_lsb = stability.line_stability_lsb;
    report.variation_percent = stability.variation_percent;
    report.decay_slope_lsb_per_line = level_decay(frame);
    report.block_map = block_means(frame, block_size);
    report.corner_delta_lsb =
        std::abs(report.block_map.at(0, 0) -
                 report.block_map.at(report.block_map.rows - 1, report.block_map.cols - 1));
    return report;
}

} // namespace grabqc
