#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "grabqc/analog.hpp"
#include "grabqc/frame.hpp"
#include "grabqc/spectral.hpp"
#include "grabqc/statistics.hpp"
#include "grabqc/sync.hpp"

namespace grabqc {

enum class TestKind { noise, adc, analog, spectral, sync };

const char* test_kind_name(TestKind kind);
std::optional<TestKind> test_kind_from_name(const std::string& name);

/// Pass/fail limits, in the units of the metric they bound. Defaults follow
/// the tolerances quoted for healthy acquisition boards; every one of them
/// is overridable per run.
struct Thresholds {
    double max_na_lsb = 1.0;
    double max_nms_lsb = 1.0;
    double max_line_stability_lsb = 2.0;
    double max_corner_delta_lsb = 2.0;
    double max_decay_lsb_per_line = 1.0;
    double max_sync_points = 1.0;
    double k_dom = 5.0;
    double missing_code_rel_threshold = 0.1;
};

enum class ReportFormat { json, text, csv_bundle };

struct EvalConfig {
    std::filesystem::path input;
    FormatSpec format;
    std::set<TestKind> tests;
    Orientation orientation = Orientation::rows;
    bool sync_subpixel = false;
    Thresholds thresholds;
};

enum class Verdict { pass, fail, not_evaluated };

struct EvaluationReport {
    std::string tool_name;
    std::string tool_version;
    std::string input_path;
    int width = 0;
    int height = 0;
    int bit_depth = 0;
    std::string digest;

    std::set<TestKind> requested;
    std::optional<NoiseReport> noise;
    std::optional<AdcReport> adc;
    std::optional<AnalogReport> analog;
    std::optional<SpectrumReport> spectral;
    std::optional<SyncReport> sync;
    std::optional<TransitionSet> transitions;

    std::map<std::string, std::string> test_errors;  // test name -> message
    std::map<std::string, Verdict> verdicts;         // threshold name -> verdict
    Thresholds thresholds;
    bool overall_pass = false;

    bool has_errors() const { return !test_errors.empty(); }
};

/// Loads the input frame and runs every requested test. A failing test is
/// recorded under test_errors and leaves the other tests untouched.
/// overall_pass is true when every evaluated threshold passes.
EvaluationReport run_evaluation(const EvalConfig& config);

/// Same, for a frame already in memory (input identification taken from
/// `label`).
EvaluationReport evaluate_frame(const Frame& frame, const EvalConfig& config,
                                const std::string& label);

std::string report_to_json(const EvaluationReport& report);
std::string report_to_text(const EvaluationReport& report);
EvaluationReport report_from_json(const std::string& json_text);

/// json/text write one file at `path`; csv_bundle treats `path` as a
/// directory and drops histogram.csv, spectrum.csv, blockmeans.csv and
/// transitions.csv into it for whichever tests ran.
void emit_report(const EvaluationReport& report, const std::filesystem::path& path,
                 ReportFormat format);

} // namespace grabqc
