#include "grabqc/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace grabqc {

namespace {

void check_level(int level, int max, const char* what) {
    if (level < 0 || level > max)
        throw Error(ErrorCode::invalid_spec, std::string(what) + " " + std::to_string(level) +
                                                 " outside [0," + std::to_string(max) + "]");
}

} // namespace

Frame generate_pattern(const PatternSpec& spec) {
    if (spec.width < 2 || spec.height < 2)
        throw Error(ErrorCode::invalid_spec, "pattern dimensions must be at least 2x2");
    if (spec.bit_depth < 1 || spec.bit_depth > 16)
        throw Error(ErrorCode::invalid_spec, "pattern bit depth must be in [1,16]");
    const int max = (1 << spec.bit_depth) - 1;

    const std::size_t count = static_cast<std::size_t>(spec.width) * spec.height;
    std::vector<std::uint16_t> samples(count);

    switch (spec.kind) {
    case PatternKind::uniform: {
        check_level(spec.level, max, "uniform level");
        std::fill(samples.begin(), samples.end(), static_cast<std::uint16_t>(spec.level));
        break;
    }
    case PatternKind::ramp: {
        check_level(spec.start_level, max, "ramp start level");
        check_level(spec.end_level, max, "ramp end level");
        std::vector<std::uint16_t> row(spec.width);
        const double span = spec.end_level - spec.start_level;
        for (int j = 0; j < spec.width; ++j)
            row[j] = static_cast<std::uint16_t>(
                std::lround(spec.start_level + span * j / (spec.width - 1)));
        for (int i = 0; i < spec.height; ++i)
            std::copy(row.begin(), row.end(), samples.begin() + static_cast<std::size_t>(i) * spec.width);
        break;
    }
    case PatternKind::bars: {
        check_level(spec.low_level, max, "bars low level");
        check_level(spec.high_level, max, "bars high level");
        if (spec.period < 2)
            throw Error(ErrorCode::invalid_spec, "bars period must be >= 2");
        if (!(spec.duty > 0.0 && spec.duty < 1.0))
            throw Error(ErrorCode::invalid_spec, "bars duty must be in (0,1)");
        const int high_pixels = static_cast<int>(std::lround(spec.duty * spec.period));
        std::vector<std::uint16_t> row(spec.width);
        for (int j = 0; j < spec.width; ++j)
            row[j] = static_cast<std::uint16_t>(
                (j % spec.period) < high_pixels ? spec.high_level : spec.low_level);
        for (int i = 0; i < spec.height; ++i)
            std::copy(row.begin(), row.end(), samples.begin() + static_cast<std::size_t>(i) * spec.width);
        break;
    }
    }
    return Frame(spec.width, spec.height, spec.bit_depth, std::move(samples));
}

namespace {

void validate_model(const DefectModel& model, const Frame& frame) {
    if (model.additive_noise) {
        const auto& n = *model.additive_noise;
        if (!(n.magnitude >= 0.0) || !std::isfinite(n.magnitude))
            throw Error(ErrorCode::invalid_model, "noise magnitude must be finite and >= 0");
    }
    if (model.line_jitter) {
        const int j = model.line_jitter->amplitude;
        if (j < 0 || j >= frame.width())
            throw Error(ErrorCode::invalid_model, "jitter amplitude must be in [0, width)");
    }
    if (model.black_level_offset) {
        const double s = model.black_level_offset->per_line_sigma;
        if (!(s >= 0.0) || !std::isfinite(s))
            throw Error(ErrorCode::invalid_model, "per-line offset sigma must be finite and >= 0");
    }
    if (model.level_decay && !std::isfinite(model.level_decay->slope))
        throw Error(ErrorCode::invalid_model, "decay slope must be finite");
    if (model.interference) {
        const auto& s = *model.interference;
        if (!(s.bin_fraction > 0.0 && s.bin_fraction <= 0.5))
            throw Error(ErrorCode::invalid_model, "interference frequency must be in (0, 0.5]");
        if (!std::isfinite(s.amplitude) || !std::isfinite(s.phase))
            throw Error(ErrorCode::invalid_model, "interference amplitude/phase must be finite");
    }
    for (std::uint16_t c : model.missing_codes)
        if (c > frame.max_code())
            throw Error(ErrorCode::invalid_model,
                        "missing code " + std::to_string(c) + " outside the code range");
    if (!model.missing_codes.empty()) {
        std::set<std::uint16_t> codes(model.missing_codes.begin(), model.missing_codes.end());
        if (codes.size() == static_cast<std::size_t>(frame.max_code()) + 1)
            throw Error(ErrorCode::invalid_model, "missing-code set covers every code");
    }
}

// Nearest surviving code: step downward past listed codes, upward from zero.
std::uint16_t remap_missing(std::uint16_t code, const std::set<std::uint16_t>& missing,
                            std::uint16_t max) {
    int c = code;
    while (c >= 0 && missing.count(static_cast<std::uint16_t>(c))) --c;
    if (c >= 0) return static_cast<std::uint16_t>(c);
    c = code;
    while (c <= max && missing.count(static_cast<std::uint16_t>(c))) ++c;
    return static_cast<std::uint16_t>(c);
}

} // namespace

Frame apply_defects(const Frame& frame, const DefectModel& model) {
    validate_model(model, frame);
    if (model.empty()) return frame;

    const int w = frame.width();
    const int h = frame.height();
    const bool analog_stage = model.additive_noise.has_value() ||
                              model.black_level_offset.has_value() ||
                              model.level_decay.has_value() || model.interference.has_value();

    std::mt19937_64 rng(model.seed);

    std::vector<double> work(frame.pixel_count());
    for (std::size_t k = 0; k < work.size(); ++k) work[k] = frame.samples()[k];

    if (model.additive_noise && model.additive_noise->magnitude > 0.0) {
        const auto& n = *model.additive_noise;
        if (n.distribution == NoiseDefect::Distribution::gaussian) {
            std::normal_distribution<double> dist(0.0, n.magnitude);
            for (double& x : work) x += dist(rng);
        } else {
            std::uniform_real_distribution<double> dist(-n.magnitude, n.magnitude);
            for (double& x : work) x += dist(rng);
        }
    }

    if (model.line_jitter && model.line_jitter->amplitude > 0) {
        const int amp = model.line_jitter->amplitude;
        std::uniform_int_distribution<int> dist(-amp, amp);
        std::vector<double> shifted(w);
        for (int i = 0; i < h; ++i) {
            const int d = dist(rng);
            double* row = work.data() + static_cast<std::size_t>(i) * w;
            if (d == 0) continue;
            if (d > 0) {
                for (int j = w - 1; j >= d; --j) shifted[j] = row[j - d];
                for (int j = 0; j < d; ++j) shifted[j] = row[0];
            } else {
                for (int j = 0; j < w + d; ++j) shifted[j] = row[j - d];
                for (int j = w + d; j < w; ++j) shifted[j] = row[w - 1];
            }
            std::copy(shifted.begin(), shifted.end(), row);
        }
    }

    if (model.black_level_offset && model.black_level_offset->per_line_sigma > 0.0) {
        std::normal_distribution<double> dist(0.0, model.black_level_offset->per_line_sigma);
        for (int i = 0; i < h; ++i) {
            const double offset = dist(rng);
            double* row = work.data() + static_cast<std::size_t>(i) * w;
            for (int j = 0; j < w; ++j) row[j] += offset;
        }
    }

    if (model.level_decay && model.level_decay->slope != 0.0) {
        const double slope = model.level_decay->slope;
        for (int i = 0; i < h; ++i) {
            double* row = work.data() + static_cast<std::size_t>(i) * w;
            for (int j = 0; j < w; ++j) row[j] += slope * j / (w - 1);
        }
    }

    if (model.interference && model.interference->amplitude != 0.0) {
        const auto& s = *model.interference;
        std::vector<double> wave(w);
        for (int j = 0; j < w; ++j)
            wave[j] = s.amplitude * std::cos(2.0 * std::numbers::pi * s.bin_fraction * j + s.phase);
        for (int i = 0; i < h; ++i) {
            double* row = work.data() + static_cast<std::size_t>(i) * w;
            for (int j = 0; j < w; ++j) row[j] += wave[j];
        }
    }

    const std::uint16_t max = frame.max_code();
    std::vector<std::uint16_t> out(work.size());
    if (analog_stage) {
        // Unbiased randomised rounding, then clamp.
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t k = 0; k < work.size(); ++k) {
            const double x = work[k];
            double floor_x = std::floor(x);
            const double frac = x - floor_x;
            if (unit(rng) < frac) floor_x += 1.0;
            out[k] = static_cast<std::uint16_t>(std::clamp(floor_x, 0.0, static_cast<double>(max)));
        }
    } else {
        for (std::size_t k = 0; k < work.size(); ++k)
            out[k] = static_cast<std::uint16_t>(std::clamp(work[k], 0.0, static_cast<double>(max)));
    }

    if (!model.missing_codes.empty()) {
        const std::set<std::uint16_t> missing(model.missing_codes.begin(),
                                              model.missing_codes.end());
        std::vector<std::uint16_t> map(static_cast<std::size_t>(max) + 1);
        for (std::uint32_t c = 0; c <= max; ++c)
            map[c] = missing.count(static_cast<std::uint16_t>(c))
                         ? remap_missing(static_cast<std::uint16_t>(c), missing, max)
                         : static_cast<std::uint16_t>(c);
        for (std::uint16_t& s : out) s = map[s];
    }

    return Frame(w, h, frame.bit_depth(), std::move(out));
}

} // namespace grabqc
