#pragma once

#include <vector>

#include "grabqc/frame.hpp"

namespace grabqc {

/// Per-block mean levels M(m,n) over non-overlapping block_size squares;
/// trailing pixels that do not fill a block are discarded.
struct BlockMeanMap {
    int block_size = 16;
    int rows = 0;
    int cols = 0;
    std::vector<double> means; // row-major

    double at(int m, int n) const { return means[static_cast<std::size_t>(m) * cols + n]; }
};

struct LevelStability {
    std::vector<double> line_means;
    double line_stability_lsb = 0.0;  // max adjacent-line mean difference
    double variation_percent = 0.0;   // (max - min line mean) / full scale * 100
};

struct AnalogReport {
    std::vector<double> line_means;
    double line_stability_lsb = 0.0;
    double variation_percent = 0.0;
    double decay_slope_lsb_per_line = 0.0;
    BlockMeanMap block_map;
    double corner_delta_lsb = 0.0; // |M(0,0) - M(last,last)|
};

/// Transition lengths found on a bars-type capture, in pixels per edge.
struct EdgeTiming {
    std::vector<int> rise_times;
    std::vector<int> fall_times;
    int low_plateau = 0;
    int high_plateau = 0;
};

/// The two modes of a bimodal frame histogram (below and above the frame
/// mean, lower code on ties). Fails with not-bimodal when either side of
/// the mean is unpopulated.
struct Plateaus {
    int low = 0;
    int high = 0;
};
Plateaus detect_plateaus(const Frame& frame);

BlockMeanMap block_means(const Frame& frame, int block_size = 16);
LevelStability level_stability(const Frame& frame);

/// Least-squares slope of the column means, scaled to LSB per full line
/// traversal. Negative values are the capacitor-discharge signature.
double level_decay(const Frame& frame);

/// Counts samples strictly between the low_frac/high_frac points of the
/// plateau-to-plateau swing for every monotonic edge, per line.
EdgeTiming edge_timing(const Frame& frame, double low_frac = 0.1, double high_frac = 0.9);

AnalogReport analog_report(const Frame& frame, int block_size = 16);

} // namespace grabqc
