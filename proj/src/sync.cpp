#include "grabqc/sync.hpp"

#include <cmath>
#include <string>

#include "grabqc/analog.hpp"

namespace grabqc {

TransitionSet detect_transitions(const Frame& frame, bool subpixel) {
    const Plateaus plateaus = detect_plateaus(frame);
    const double mid = (plateaus.low + plateaus.high) / 2.0;

    TransitionSet set;
    set.line_count = frame.height();

    std::vector<int> bad_lines;
    for (int i = 0; i < frame.height(); ++i) {
        const auto line = frame.line(i);
        std::vector<double> line_points;
        std::vector<bool> line_rising;
        bool prev_high = line[0] >= mid;
        for (int j = 1; j < frame.width(); ++j) {
            const bool here_high = line[j] >= mid;
            if (here_high == prev_high) continue;
            double column = j;
            if (subpixel) {
                const double prev = line[j - 1];
                const double here = line[j];
                column = (j - 1) + (mid - prev) / (here - prev);
            }
            line_points.push_back(column);
            line_rising.push_back(here_high);
            prev_high = here_high;
        }

        if (i == 0) {
            set.q_count = static_cast<int>(line_points.size());
            set.rising = line_rising;
        }
        if (static_cast<int>(line_points.size()) != set.q_count) {
            bad_lines.push_back(i);
            continue;
        }
        set.points.insert(set.points.end(), line_points.begin(), line_points.end());
    }

    if (!bad_lines.empty()) {
        std::string lines;
        for (std::size_t k = 0; k < bad_lines.size() && k < 10; ++k)
            lines += (k ? "," : "") + std::to_string(bad_lines[k]);
        if (bad_lines.size() > 10) lines += ",...";
        throw Error(ErrorCode::inconsistent_transition_count,
                    std::to_string(bad_lines.size()) + " line(s) disagree with the " +
                        std::to_string(set.q_count) + " transitions of line 0 (lines " + lines +
                        ")");
    }
    if (set.q_count == 0)
        throw Error(ErrorCode::inconsistent_transition_count,
                    "no mid-level crossings found on any line");
    return set;
}

namespace {

void validate_set(const TransitionSet& set) {
    if (set.q_count < 1 || set.line_count < 1 ||
        set.points.size() != static_cast<std::size_t>(set.q_count) * set.line_count)
        throw Error(ErrorCode::invalid_argument, "transition set is not rectangular");
}

} // namespace

std::vector<double> transition_means(const TransitionSet& set) {
    validate_set(set);
    std::vector<double> means(set.q_count, 0.0);
    for (int k = 0; k < set.line_count; ++k)
        for (int q = 0; q < set.q_count; ++q) means[q] += set.at(k, q);
    for (double& m : means) m /= set.line_count;
    return means;
}

SyncReport sync_accuracy(const TransitionSet& set) {
    validate_set(set);
    SyncReport report;
    report.means = transition_means(set);
    report.per_transition_deviation.assign(set.q_count, 0.0);
    for (int q = 0; q < set.q_count; ++q) {
        double sum = 0.0;
        for (int k = 0; k < set.line_count; ++k)
            sum += std::abs(set.at(k, q) - report.means[q]);
        report.per_transition_deviation[q] = sum / set.line_count;
    }
    double total = 0.0;
    for (double d : report.per_transition_deviation) total += d;
    report.accuracy = total / set.q_count;
    return report;
}

} // namespace grabqc
