#include "grabqc/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "grabqc/version.hpp"

namespace grabqc {

using ordered_json = nlohmann::ordered_json;

const char* test_kind_name(TestKind kind) {
    switch (kind) {
    case TestKind::noise: return "noise";
    case TestKind::adc: return "adc";
    case TestKind::analog: return "analog";
    case TestKind::spectral: return "spectral";
    case TestKind::sync: return "sync";
    }
    return "unknown";
}

std::optional<TestKind> test_kind_from_name(const std::string& name) {
    if (name == "noise") return TestKind::noise;
    if (name == "adc") return TestKind::adc;
    if (name == "analog") return TestKind::analog;
    if (name == "spectral") return TestKind::spectral;
    if (name == "sync") return TestKind::sync;
    return std::nullopt;
}

namespace {

constexpr TestKind kAllTests[] = {TestKind::noise, TestKind::adc, TestKind::analog,
                                  TestKind::spectral, TestKind::sync};

const char* verdict_name(Verdict verdict) {
    switch (verdict) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_evaluated: return "not-evaluated";
    }
    return "unknown";
}

Verdict verdict_from_name(const std::string& name) {
    if (name == "pass") return Verdict::pass;
    if (name == "fail") return Verdict::fail;
    return Verdict::not_evaluated;
}

Verdict bound_verdict(double value, double limit) {
    return value <= limit ? Verdict::pass : Verdict::fail;
}

} // namespace

EvaluationReport evaluate_frame(const Frame& frame, const EvalConfig& config,
                                const std::string& label) {
    if (config.tests.empty())
        throw Error(ErrorCode::invalid_argument, "no tests requested");

    EvaluationReport report;
    report.tool_name = kToolName;
    report.tool_version = kToolVersion;
    report.input_path = label;
    report.width = frame.width();
    report.height = frame.height();
    report.bit_depth = frame.bit_depth();
    report.digest = content_digest(frame);
    report.requested = config.tests;
    report.thresholds = config.thresholds;

    const Thresholds& limits = config.thresholds;
    auto run = [&](TestKind kind, auto&& body) {
        if (!config.tests.count(kind)) return;
        try {
            body();
        } catch (const Error& e) {
            report.test_errors[test_kind_name(kind)] = e.what();
        }
    };

    run(TestKind::noise, [&] { report.noise = noise_metrics(frame); });
    run(TestKind::adc,
        [&] { report.adc = adc_report(frame, limits.missing_code_rel_threshold); });
    run(TestKind::analog, [&] { report.analog = analog_report(frame); });
    run(TestKind::spectral,
        [&] { report.spectral = spectrum_report(frame, limits.k_dom, config.orientation); });
    run(TestKind::sync, [&] {
        report.transitions = detect_transitions(frame, config.sync_subpixel);
        report.sync = sync_accuracy(*report.transitions);
    });

    auto& verdicts = report.verdicts;
    verdicts["noise.abs_mean_noise"] =
        report.noise ? bound_verdict(report.noise->abs_mean_noise, limits.max_na_lsb)
                     : Verdict::not_evaluated;
    verdicts["noise.rms_noise"] =
        report.noise ? bound_verdict(report.noise->rms_noise, limits.max_nms_lsb)
                     : Verdict::not_evaluated;
    verdicts["adc.missing_codes"] =
        report.adc ? (report.adc->missing_codes.empty() ? Verdict::pass : Verdict::fail)
                   : Verdict::not_evaluated;
    verdicts["analog.line_stability"] =
        report.analog
            ? bound_verdict(report.analog->line_stability_lsb, limits.max_line_stability_lsb)
            : Verdict::not_evaluated;
    verdicts["analog.corner_delta"] =
        report.analog
            ? bound_verdict(report.analog->corner_delta_lsb, limits.max_corner_delta_lsb)
            : Verdict::not_evaluated;
    verdicts["analog.decay_slope"] =
        report.analog ? bound_verdict(std::abs(report.analog->decay_slope_lsb_per_line),
                                      limits.max_decay_lsb_per_line)
                      : Verdict::not_evaluated;
    verdicts["spectral.dominant_free"] =
        report.spectral ? (report.spectral->dominant.empty() ? Verdict::pass : Verdict::fail)
                        : Verdict::not_evaluated;
    verdicts["sync.accuracy"] =
        report.sync ? bound_verdict(report.sync->accuracy, limits.max_sync_points)
                    : Verdict::not_evaluated;

    report.overall_pass = true;
    for (const auto& [name, verdict] : verdicts)
        if (verdict == Verdict::fail) report.overall_pass = false;
    return report;
}

EvaluationReport run_evaluation(const EvalConfig& config) {
    const Frame frame = load_frame(config.input, config.format);
    return evaluate_frame(frame, config, config.input.string());
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

ordered_json thresholds_to_json(const Thresholds& t) {
    return ordered_json{{"max_na_lsb", t.max_na_lsb},
                        {"max_nms_lsb", t.max_nms_lsb},
                        {"max_line_stability_lsb", t.max_line_stability_lsb},
                        {"max_corner_delta_lsb", t.max_corner_delta_lsb},
                        {"max_decay_lsb_per_line", t.max_decay_lsb_per_line},
                        {"max_sync_points", t.max_sync_points},
                        {"k_dom", t.k_dom},
                        {"missing_code_rel_threshold", t.missing_code_rel_threshold}};
}

Thresholds thresholds_from_json(const ordered_json& j) {
    Thresholds t;
    t.max_na_lsb = j.at("max_na_lsb").get<double>();
    t.max_nms_lsb = j.at("max_nms_lsb").get<double>();
    t.max_line_stability_lsb = j.at("max_line_stability_lsb").get<double>();
    t.max_corner_delta_lsb = j.at("max_corner_delta_lsb").get<double>();
    t.max_decay_lsb_per_line = j.at("max_decay_lsb_per_line").get<double>();
    t.max_sync_points = j.at("max_sync_points").get<double>();
    t.k_dom = j.at("k_dom").get<double>();
    t.missing_code_rel_threshold = j.at("missing_code_rel_threshold").get<double>();
    return t;
}

} // namespace

std::string report_to_json(const EvaluationReport& report) {
    ordered_json j;
    j["schema_version"] = 1;
    j["tool"] = {{"name", report.tool_name}, {"version", report.tool_version}};
    j["input"] = {{"path", report.input_path},
                  {"width", report.width},
                  {"height", report.height},
                  {"bit_depth", report.bit_depth},
                  {"digest", report.digest}};

    ordered_json tests = ordered_json::array();
    for (TestKind kind : kAllTests)
        if (report.requested.count(kind)) tests.push_back(test_kind_name(kind));
    j["config"] = {{"tests", tests}, {"thresholds", thresholds_to_json(report.thresholds)}};

    ordered_json results = ordered_json::object();
    if (report.noise) {
        results["noise"] = {{"mean_level", report.noise->mean_level},
                            {"abs_mean_noise", report.noise->abs_mean_noise},
                            {"max_noise", report.noise->max_noise},
                            {"rms_noise", report.noise->rms_noise}};
    }
    if (report.adc) {
        results["adc"] = {{"missing_codes", report.adc->missing_codes},
                          {"effective_resolution_bits", report.adc->effective_resolution_bits},
                          {"histogram", report.adc->histogram.counts}};
    }
    if (report.analog) {
        ordered_json blocks = ordered_json::array();
        for (int m = 0; m < report.analog->block_map.rows; ++m) {
            ordered_json row = ordered_json::array();
            for (int n = 0; n < report.analog->block_map.cols; ++n)
                row.push_back(report.analog->block_map.at(m, n));
            blocks.push_back(std::move(row));
        }
        results["analog"] = {{"line_means", report.analog->line_means},
                             {"line_stability_lsb", report.analog->line_stability_lsb},
                             {"variation_percent", report.analog->variation_percent},
                             {"decay_slope_lsb_per_line", report.analog->decay_slope_lsb_per_line},
                             {"block_size", report.analog->block_map.block_size},
                             {"block_means", std::move(blocks)},
                             {"corner_delta_lsb", report.analog->corner_delta_lsb}};
    }
    if (report.spectral) {
        ordered_json dominant = ordered_json::array();
        for (const auto& entry : report.spectral->dominant)
            dominant.push_back({{"bin", entry.bin},
                                {"freq_fraction", entry.freq_fraction},
                                {"power", entry.power},
                                {"power_ratio_percent", entry.power_ratio_percent}});
        results["spectral"] = {
            {"line_length", report.spectral->line_length},
            {"orientation",
             report.spectral->orientation == Orientation::rows ? "rows" : "columns"},
            {"mean_power", report.spectral->mean_power},
            {"dominance_factor", report.spectral->dominance_factor},
            {"dominant", std::move(dominant)},
            {"global_power", report.spectral->global_power}};
    }
    if (report.sync) {
        ordered_json sync = {{"q_count", report.transitions ? report.transitions->q_count
                                                            : static_cast<int>(report.sync->means.size())},
                             {"means", report.sync->means},
                             {"per_transition_deviation", report.sync->per_transition_deviation},
                             {"accuracy", report.sync->accuracy},
                             {"unit", "points/transition"}};
        if (report.transitions) {
            ordered_json rising = ordered_json::array();
            for (bool r : report.transitions->rising) rising.push_back(r);
            sync["rising"] = std::move(rising);
            ordered_json points = ordered_json::array();
            for (int k = 0; k < report.transitions->line_count; ++k) {
                ordered_json row = ordered_json::array();
                for (int q = 0; q < report.transitions->q_count; ++q)
                    row.push_back(report.transitions->at(k, q));
                points.push_back(std::move(row));
            }
            sync["points"] = std::move(points);
        }
        results["sync"] = std::move(sync);
    }
    j["results"] = std::move(results);

    j["test_errors"] = report.test_errors;

    ordered_json verdicts = ordered_json::object();
    for (const auto& [name, verdict] : report.verdicts) verdicts[name] = verdict_name(verdict);
    j["verdicts"] = std::move(verdicts);
    j["overall"] = report.overall_pass ? "pass" : "fail";
    return j.dump(2) + "\n";
}

EvaluationReport report_from_json(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::report_parse_error, std::string("bad report JSON: ") + e.what());
    }
    try {
        EvaluationReport report;
        report.tool_name = j.at("tool").at("name").get<std::string>();
        report.tool_version = j.at("tool").at("version").get<std::string>();
        const auto& input = j.at("input");
        report.input_path = input.at("path").get<std::string>();
        report.width = input.at("width").get<int>();
        report.height = input.at("height").get<int>();
        report.bit_depth = input.at("bit_depth").get<int>();
        report.digest = input.at("digest").get<std::string>();

        for (const auto& name : j.at("config").at("tests"))
            if (auto kind = test_kind_from_name(name.get<std::string>()))
                report.requested.insert(*kind);
        report.thresholds = thresholds_from_json(j.at("config").at("thresholds"));

        const auto& results = j.at("results");
        if (results.contains("noise")) {
            const auto& n = results["noise"];
            report.noise = NoiseReport{n.at("mean_level"), n.at("abs_mean_noise"),
                                       n.at("max_noise"), n.at("rms_noise")};
        }
        if (results.contains("adc")) {
            const auto& a = results["adc"];
            AdcReport adc;
            adc.missing_codes = a.at("missing_codes").get<std::vector<int>>();
            adc.effective_resolution_bits = a.at("effective_resolution_bits").get<double>();
            adc.histogram.bit_depth = report.bit_depth;
            adc.histogram.counts = a.at("histogram").get<std::vector<std::uint64_t>>();
            report.adc = std::move(adc);
        }
        if (results.contains("analog")) {
            const auto& a = results["analog"];
            AnalogReport analog;
            analog.line_means = a.at("line_means").get<std::vector<double>>();
            analog.line_stability_lsb = a.at("line_stability_lsb").get<double>();
            analog.variation_percent = a.at("variation_percent").get<double>();
            analog.decay_slope_lsb_per_line = a.at("decay_slope_lsb_per_line").get<double>();
            analog.block_map.block_size = a.at("block_size").get<int>();
            const auto& blocks = a.at("block_means");
            analog.block_map.rows = static_cast<int>(blocks.size());
            analog.block_map.cols = blocks.empty() ? 0 : static_cast<int>(blocks[0].size());
            for (const auto& row : blocks)
                for (const auto& v : row) analog.block_map.means.push_back(v.get<double>());
            analog.corner_delta_lsb = a.at("corner_delta_lsb").get<double>();
            report.analog = std::move(analog);
        }
        if (results.contains("spectral")) {
            const auto& s = results["spectral"];
            SpectrumReport spectral;
            spectral.line_length = s.at("line_length").get<int>();
            spectral.orientation = s.at("orientation").get<std::string>() == "columns"
                                       ? Orientation::columns
                                       : Orientation::rows;
            spectral.mean_power = s.at("mean_power").get<double>();
            spectral.dominance_factor = s.at("dominance_factor").get<double>();
            spectral.global_power = s.at("global_power").get<std::vector<double>>();
            for (const auto& d : s.at("dominant")) {
                DominantFrequency entry;
                entry.bin = d.at("bin").get<int>();
                entry.freq_fraction = d.at("freq_fraction").get<double>();
                entry.power = d.at("power").get<double>();
                entry.power_ratio_percent = d.at("power_ratio_percent").get<double>();
                spectral.dominant.push_back(entry);
            }
            report.spectral = std::move(spectral);
        }
        if (results.contains("sync")) {
            const auto& s = results["sync"];
            SyncReport sync;
            sync.means = s.at("means").get<std::vector<double>>();
            sync.per_transition_deviation =
                s.at("per_transition_deviation").get<std::vector<double>>();
            sync.accuracy = s.at("accuracy").get<double>();
            report.sync = std::move(sync);
            if (s.contains("points")) {
                TransitionSet set;
                set.q_count = s.at("q_count").get<int>();
                for (const auto& r : s.at("rising")) set.rising.push_back(r.get<bool>());
                const auto& points = s.at("points");
                set.line_count = static_cast<int>(points.size());
                for (const auto& row : points)
                    for (const auto& v : row) set.points.push_back(v.get<double>());
                report.transitions = std::move(set);
            }
        }

        for (const auto& [key, value] : j.at("test_errors").items())
            report.test_errors[key] = value.get<std::string>();
        for (const auto& [key, value] : j.at("verdicts").items())
            report.verdicts[key] = verdict_from_name(value.get<std::string>());
        report.overall_pass = j.at("overall").get<std::string>() == "pass";
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::report_parse_error,
                    std::string("report JSON missing fields: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// Verdict tag for one test row, folding that test's threshold verdicts.
std::string row_tag(const EvaluationReport& report, std::initializer_list<const char*> keys) {
    bool any_fail = false;
    bool any_eval = false;
    for (const char* key : keys) {
        const auto it = report.verdicts.find(key);
        if (it == report.verdicts.end()) continue;
        if (it->second == Verdict::fail) any_fail = true;
        if (it->second != Verdict::not_evaluated) any_eval = true;
    }
    if (!any_eval) return "[not evaluated]";
    return any_fail ? "[fail]" : "[pass]";
}

} // namespace

std::string report_to_text(const EvaluationReport& report) {
    std::string out;
    out += report.tool_name + " " + report.tool_version + " evaluation report\n";
    out += "Input: " + report.input_path + "  " + std::to_string(report.width) + "x" +
           std::to_string(report.height) + "  " + std::to_string(report.bit_depth) + "-bit  " +
           report.digest + "\n";

    auto error_of = [&](TestKind kind) -> const std::string* {
        const auto it = report.test_errors.find(test_kind_name(kind));
        return it == report.test_errors.end() ? nullptr : &it->second;
    };

    if (report.requested.count(TestKind::noise)) {
        out += "Noise performance:      ";
        if (const auto* err = error_of(TestKind::noise))
            out += "not evaluated (" + *err + ")";
        else if (report.noise)
            out += "abs. " + fixed(report.noise->abs_mean_noise, 4) + " LSB  RMS " +
                   fixed(report.noise->rms_noise, 4) + " LSB  max " +
                   fixed(report.noise->max_noise, 4) + " LSB  (mean level " +
                   fixed(report.noise->mean_level, 4) + " LSB)  " +
                   row_tag(report, {"noise.abs_mean_noise", "noise.rms_noise"});
        out += "\n";
    }
    if (report.requested.count(TestKind::adc)) {
        out += "ADC parameters:         ";
        if (const auto* err = error_of(TestKind::adc))
            out += "not evaluated (" + *err + ")";
        else if (report.adc) {
            if (report.adc->missing_codes.empty())
                out += "No missing codes.";
            else {
                out += "Missing codes:";
                for (int c : report.adc->missing_codes) out += " " + std::to_string(c);
                out += ".";
            }
            out += "  effective resolution " +
                   fixed(report.adc->effective_resolution_bits, 2) + " bits  " +
                   row_tag(report, {"adc.missing_codes"});
        }
        out += "\n";
    }
    if (report.requested.count(TestKind::analog)) {
        out += "Black level stability:  ";
        if (const auto* err = error_of(TestKind::analog))
            out += "not evaluated (" + *err + ")";
        else if (report.analog)
            out += "variation " + fixed(report.analog->variation_percent, 4) +
                   "%  line stability " + fixed(report.analog->line_stability_lsb, 4) +
                   " LSB  decay " + fixed(report.analog->decay_slope_lsb_per_line, 4) +
                   " LSB/line  corner delta " + fixed(report.analog->corner_delta_lsb, 4) +
                   " LSB  " +
                   row_tag(report,
                           {"analog.line_stability", "analog.corner_delta", "analog.decay_slope"});
        out += "\n";
    }
    if (report.requested.count(TestKind::spectral)) {
        out += "Dominant freq.:         ";
        if (const auto* err = error_of(TestKind::spectral))
            out += "not evaluated (" + *err + ")";
        else if (report.spectral)
            out += format_dominant(report.spectral->dominant) + "  " +
                   row_tag(report, {"spectral.dominant_free"});
        out += "\n";
    }
    if (report.requested.count(TestKind::sync)) {
        out += "Sync. parameters:       ";
        if (const auto* err = error_of(TestKind::sync))
            out += "not evaluated (" + *err + ")";
        else if (report.sync)
            out += fixed(report.sync->accuracy, 2) + " points/transition  " +
                   row_tag(report, {"sync.accuracy"});
        out += "\n";
    }

    out += "Overall: ";
    out += report.overall_pass ? "PASS" : "FAIL";
    if (report.has_errors()) out += " (with errors)";
    out += "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::unwritable_path, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw Error(ErrorCode::unwritable_path, "write failed: " + path.string());
}

std::string shortest(double v) {
    // nlohmann's shortest round-trip formatting, reused for CSV so the two
    // outputs agree byte for byte.
    return ordered_json(v).dump();
}

} // namespace

void emit_report(const EvaluationReport& report, const std::filesystem::path& path,
                 ReportFormat format) {
    switch (format) {
    case ReportFormat::json:
        write_file(path, report_to_json(report));
        return;
    case ReportFormat::text:
        write_file(path, report_to_text(report));
        return;
    case ReportFormat::csv_bundle:
        break;
    }

    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec)
        throw Error(ErrorCode::unwritable_path, "cannot create directory " + path.string());

    if (report.adc) {
        std::string csv = "code,count\n";
        for (std::size_t c = 0; c < report.adc->histogram.counts.size(); ++c)
            csv += std::to_string(c) + "," + std::to_string(report.adc->histogram.counts[c]) + "\n";
        write_file(path / "histogram.csv", csv);
    }
    if (report.spectral) {
        std::string csv = "bin,freq_fraction,power\n";
        for (std::size_t b = 0; b < report.spectral->global_power.size(); ++b)
            csv += std::to_string(b) + "," +
                   shortest(static_cast<double>(b) / report.spectral->line_length) + "," +
                   shortest(report.spectral->global_power[b]) + "\n";
        write_file(path / "spectrum.csv", csv);
    }
    if (report.analog) {
        std::string csv;
        for (int m = 0; m < report.analog->block_map.rows; ++m) {
            for (int n = 0; n < report.analog->block_map.cols; ++n) {
                if (n) csv += ",";
                csv += shortest(report.analog->block_map.at(m, n));
            }
            csv += "\n";
        }
        write_file(path / "blockmeans.csv", csv);
    }
    if (report.transitions) {
        std::string csv = "line,q,column\n";
        for (int k = 0; k < report.transitions->line_count; ++k)
            for (int q = 0; q < report.transitions->q_count; ++q)
                csv += std::to_string(k) + "," + std::to_string(q + 1) + "," +
                       shortest(report.transitions->at(k, q)) + "\n";
        write_file(path / "transitions.csv", csv);
    }
}

} // namespace grabqc
