#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "grabqc/frame.hpp"

namespace grabqc {

enum class PatternKind { uniform, ramp, bars };

/// Geometry of a synthetic test frame.
///   uniform - every sample at `level`; the flat-field used for noise and
///             black-level analyses.
///   ramp    - linear left-to-right sweep from start_level to end_level on
///             every line; exercises the full code range for ADC tests.
///   bars    - vertical bars repeating every `period` pixels, the first
///             round(duty * period) pixels of each period at high_level and
///             the rest at low_level; provides the edges for timing and
///             synchronisation tests.
struct PatternSpec {
    PatternKind kind = PatternKind::uniform;
    int width = 0;
    int height = 0;
    int bit_depth = 8;
    int level = 0;
    int start_level = 0;
    int end_level = 0;
    int low_level = 0;
    int high_level = 0;
    int period = 2;
    double duty = 0.5;
};

struct NoiseDefect {
    enum class Distribution { gaussian, uniform };
    Distribution distribution = Distribution::gaussian;
    double magnitude = 0.0; // gaussian sigma, or uniform half-width, in LSB
};

struct JitterDefect {
    int amplitude = 0; // each line shifts by d drawn uniformly from {-J..+J}
};

struct LineOffsetDefect {
    double per_line_sigma = 0.0; // gaussian offset drawn once per line, in LSB
};

struct DecayDefect {
    double slope = 0.0; // LSB added across one full line width (negative = loss)
};

struct InterferenceDefect {
    double bin_fraction = 0.25; // cycles per pixel, in (0, 0.5]
    double amplitude = 0.0;     // LSB
    double phase = 0.0;         // radians
};

/// Calibrated defect injection. Stages apply in declaration order:
/// noise, jitter, line offset, decay, interference, then missing codes.
/// All randomness comes from a single std::mt19937_64 seeded with `seed`
/// and consumed in that stage order, so a given (frame, model) pair is
/// bit-reproducible. Real-valued stage sums are quantised with seeded
/// unbiased randomised rounding; this dithers the grid so that injected
/// sub-LSB gradients survive averaging analyses instead of collapsing
/// into staircase artifacts. Results are clamped to the code range.
/// Missing codes are remapped after quantisation, so listed codes never
/// occur in the output.
struct DefectModel {
    std::optional<NoiseDefect> additive_noise;
    std::optional<JitterDefect> line_jitter;
    std::optional<LineOffsetDefect> black_level_offset;
    std::optional<DecayDefect> level_decay;
    std::optional<InterferenceDefect> interference;
    std::vector<std::uint16_t> missing_codes;
    std::uint64_t seed = 0;

    bool empty() const {
        return !additive_noise && !line_jitter && !black_level_offset && !level_decay &&
               !interference && missing_codes.empty();
    }
};

Frame generate_pattern(const PatternSpec& spec);
Frame apply_defects(const Frame& frame, const DefectModel& model);

} // namespace grabqc
