#pragma once

#include <vector>

#include "grabqc/frame.hpp"

namespace grabqc {

/// Mid-level crossing columns m_q(k) of a bars-type capture: one row of Q
/// strictly increasing points per line, plus each transition's polarity
/// taken from the first line.
struct TransitionSet {
    int q_count = 0;
    int line_count = 0;
    std::vector<double> points;  // line-major, points[k * q_count + q]
    std::vector<bool> rising;    // per transition index q

    double at(int line, int q) const {
        return points[static_cast<std::size_t>(line) * q_count + q];
    }
};

struct SyncReport {
    std::vector<double> means;                    // M_q
    std::vector<double> per_transition_deviation; // mean |m_q(k) - M_q| per q
    double accuracy = 0.0;                        // S_y, points per transition
};

/// Locates mid-level crossings on every line. The transition point is the
/// column where the new level is first seen; with subpixel set, it is
/// refined by linear interpolation between the straddling samples. The
/// transition count of the first line is enforced on all lines; lines that
/// disagree (jitter clipping at the frame edge, or the wrong pattern) are
/// reported in the error rather than dropped.
TransitionSet detect_transitions(const Frame& frame, bool subpixel = false);

std::vector<double> transition_means(const TransitionSet& set);
SyncReport sync_accuracy(const TransitionSet& set);

} // namespace grabqc
