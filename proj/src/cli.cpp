#include "grabqc/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "grabqc/evaluation.hpp"
#include "grabqc/pattern.hpp"
#include "grabqc/version.hpp"

namespace grabqc::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdictFail = 1;
constexpr int kExitUsage = 2;

std::pair<int, int> parse_size(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos)
        throw CLI::ValidationError("--size", "expected WIDTHxHEIGHT, got '" + text + "'");
    try {
        return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--size", "expected WIDTHxHEIGHT, got '" + text + "'");
    }
}

FormatKind format_from_name(const std::string& name) {
    if (name == "pgm") return FormatKind::pgm_binary;
    if (name == "raw8") return FormatKind::raw8;
    if (name == "raw16le") return FormatKind::raw16le;
    throw CLI::ValidationError("--format", "unknown format '" + name + "'");
}

struct GenerateOptions {
    std::string pattern = "uniform";
    std::string size = "256x256";
    int bit_depth = 8;
    int level = 128;
    int ramp_start = 0;
    int ramp_end = -1; // -1 = full scale
    int low_level = 32;
    int high_level = 224;
    int period = 64;
    double duty = 0.5;

    std::string noise_dist;
    double noise_mag = 0.0;
    int jitter = 0;
    double line_offset_sigma = 0.0;
    double decay = 0.0;
    double interference_freq = 0.0;
    double interference_amp = 0.0;
    double interference_phase = 0.0;
    std::vector<int> missing_codes;
    std::uint64_t seed = 0;

    std::string out;
    std::string format = "pgm";
};

int run_generate(const GenerateOptions& opt) {
    PatternSpec spec;
    auto [w, h] = parse_size(opt.size);
    spec.width = w;
    spec.height = h;
    spec.bit_depth = opt.bit_depth;
    const int full = (1 << opt.bit_depth) - 1;
    if (opt.pattern == "uniform") {
        spec.kind = PatternKind::uniform;
        spec.level = opt.level;
    } else if (opt.pattern == "ramp") {
        spec.kind = PatternKind::ramp;
        spec.start_level = opt.ramp_start;
        spec.end_level = opt.ramp_end < 0 ? full : opt.ramp_end;
    } else if (opt.pattern == "bars") {
        spec.kind = PatternKind::bars;
        spec.low_level = opt.low_level;
        spec.high_level = opt.high_level;
        spec.period = opt.period;
        spec.duty = opt.duty;
    } else {
        std::cerr << "grabqc: unknown pattern '" << opt.pattern << "'\n";
        return kExitUsage;
    }

    DefectModel model;
    model.seed = opt.seed;
    if (!opt.noise_dist.empty()) {
        NoiseDefect noise;
        noise.distribution = opt.noise_dist == "uniform" ? NoiseDefect::Distribution::uniform
                                                         : NoiseDefect::Distribution::gaussian;
        noise.magnitude = opt.noise_mag;
        model.additive_noise = noise;
    }
    if (opt.jitter > 0) model.line_jitter = JitterDefect{opt.jitter};
    if (opt.line_offset_sigma > 0.0) model.black_level_offset = LineOffsetDefect{opt.line_offset_sigma};
    if (opt.decay != 0.0) model.level_decay = DecayDefect{opt.decay};
    if (opt.interference_amp != 0.0)
        model.interference =
            InterferenceDefect{opt.interference_freq, opt.interference_amp, opt.interference_phase};
    for (int c : opt.missing_codes) model.missing_codes.push_back(static_cast<std::uint16_t>(c));

    Frame frame = generate_pattern(spec);
    if (!model.empty()) frame = apply_defects(frame, model);

    FormatSpec out_spec;
    out_spec.kind = format_from_name(opt.format);
    save_frame(frame, opt.out, out_spec);
    return kExitOk;
}

struct AnalyzeOptions {
    std::string input;
    std::string format = "pgm";
    std::string size;
    int bit_depth = 8;
    std::vector<std::string> tests;
    std::string orientation = "rows";
    bool sync_subpixel = false;
    Thresholds thresholds;
    std::string out;
    std::string report_format = "json";
    bool quiet = false;
};

ReportFormat report_format_from_name(const std::string& name) {
    if (name == "json") return ReportFormat::json;
    if (name == "text") return ReportFormat::text;
    if (name == "csv-bundle") return ReportFormat::csv_bundle;
    throw CLI::ValidationError("--report-format", "unknown report format '" + name + "'");
}

int run_analyze(const AnalyzeOptions& opt) {
    EvalConfig config;
    config.input = opt.input;
    config.format.kind = format_from_name(opt.format);
    if (config.format.kind != FormatKind::pgm_binary) {
        if (opt.size.empty()) {
            std::cerr << "grabqc: raw input requires --size\n";
            return kExitUsage;
        }
        auto [w, h] = parse_size(opt.size);
        config.format.width = w;
        config.format.height = h;
        config.format.bit_depth = opt.bit_depth;
    }

    for (const std::string& name : opt.tests) {
        if (name == "all") {
            config.tests = {TestKind::noise, TestKind::adc, TestKind::analog, TestKind::spectral,
                            TestKind::sync};
            continue;
        }
        const auto kind = test_kind_from_name(name);
        if (!kind) {
            std::cerr << "grabqc: unknown test '" << name << "'\n";
            return kExitUsage;
        }
        config.tests.insert(*kind);
    }
    if (config.tests.empty()) {
        std::cerr << "grabqc: --tests must name at least one of noise,adc,analog,spectral,sync\n";
        return kExitUsage;
    }
    if (opt.orientation == "columns")
        config.orientation = Orientation::columns;
    else if (opt.orientation != "rows") {
        std::cerr << "grabqc: --orientation must be rows or columns\n";
        return kExitUsage;
    }
    config.sync_subpixel = opt.sync_subpixel;
    config.thresholds = opt.thresholds;

    const EvaluationReport report = run_evaluation(config);

    if (!opt.out.empty())
        emit_report(report, opt.out, report_format_from_name(opt.report_format));
    if (!opt.quiet) std::cout << report_to_text(report);

    return report.overall_pass && !report.has_errors() ? kExitOk : kExitVerdictFail;
}

struct ReportOptions {
    std::string in;
    std::string format = "text";
    std::string out;
};

int run_report(const ReportOptions& opt) {
    std::ifstream in(opt.in, std::ios::binary);
    if (!in) {
        std::cerr << "grabqc: cannot open " << opt.in << "\n";
        return kExitUsage;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const EvaluationReport report = report_from_json(buffer.str());

    const ReportFormat format = report_format_from_name(opt.format);
    if (opt.out.empty()) {
        if (format == ReportFormat::csv_bundle) {
            std::cerr << "grabqc: csv-bundle output requires --out DIRECTORY\n";
            return kExitUsage;
        }
        std::cout << (format == ReportFormat::json ? report_to_json(report)
                                                   : report_to_text(report));
    } else {
        emit_report(report, opt.out, format);
    }
    return kExitOk;
}

void add_threshold_options(CLI::App* cmd, Thresholds& t) {
    cmd->add_option("--max-na", t.max_na_lsb, "Max abs mean noise, LSB")
        ->capture_default_str();
    cmd->add_option("--max-nms", t.max_nms_lsb, "Max RMS noise, LSB")->capture_default_str();
    cmd->add_option("--max-line-stability", t.max_line_stability_lsb,
                    "Max adjacent-line mean difference, LSB")
        ->capture_default_str();
    cmd->add_option("--max-corner-delta", t.max_corner_delta_lsb,
                    "Max block-mean corner difference, LSB")
        ->capture_default_str();
    cmd->add_option("--max-decay", t.max_decay_lsb_per_line, "Max |level decay|, LSB per line")
        ->capture_default_str();
    cmd->add_option("--max-sync", t.max_sync_points, "Max sync accuracy, points/transition")
        ->capture_default_str();
    cmd->add_option("--k-dom", t.k_dom, "Dominance factor over the mean bin power")
        ->capture_default_str()
        ->check(CLI::Range(1.000001, 1e9));
    cmd->add_option("--missing-code-threshold", t.missing_code_rel_threshold,
                    "Missing-code threshold relative to neighbour counts")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 0.999999));
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Frame-grabber acquisition quality evaluation"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    GenerateOptions gen;
    CLI::App* generate = app.add_subcommand("generate", "Synthesize a test frame");
    generate->add_option("--pattern", gen.pattern, "uniform|ramp|bars")->capture_default_str();
    generate->add_option("--size", gen.size, "WIDTHxHEIGHT")->capture_default_str();
    generate->add_option("--bit-depth", gen.bit_depth, "Bits per sample")
        ->capture_default_str()
        ->check(CLI::Range(1, 16));
    generate->add_option("--level", gen.level, "Uniform grey level")->capture_default_str();
    generate->add_option("--ramp-start", gen.ramp_start, "Ramp start level")
        ->capture_default_str();
    generate->add_option("--ramp-end", gen.ramp_end, "Ramp end level (default full scale)");
    generate->add_option("--low", gen.low_level, "Bars low level")->capture_default_str();
    generate->add_option("--high", gen.high_level, "Bars high level")->capture_default_str();
    generate->add_option("--period", gen.period, "Bars period, pixels")->capture_default_str();
    generate->add_option("--duty", gen.duty, "Bars duty cycle (fraction high)")
        ->capture_default_str();
    generate->add_option("--noise", gen.noise_dist, "Additive noise: gaussian|uniform")
        ->check(CLI::IsMember({"gaussian", "uniform"}));
    generate->add_option("--noise-mag", gen.noise_mag,
                         "Noise sigma (gaussian) or half-width (uniform), LSB");
    generate->add_option("--jitter", gen.jitter, "Line jitter amplitude, pixels");
    generate->add_option("--line-offset-sigma", gen.line_offset_sigma,
                         "Per-line black level offset sigma, LSB");
    generate->add_option("--decay", gen.decay, "Level decay, LSB per full line");
    generate->add_option("--interference-freq", gen.interference_freq,
                         "Interference frequency, cycles/pixel in (0,0.5]");
    generate->add_option("--interference-amp", gen.interference_amp,
                         "Interference amplitude, LSB");
    generate->add_option("--interference-phase", gen.interference_phase,
                         "Interference phase, radians");
    generate->add_option("--missing-codes", gen.missing_codes, "Codes to suppress")
        ->delimiter(',');
    generate->add_option("--seed", gen.seed, "Defect injection seed")->capture_default_str();
    generate->add_option("--out", gen.out, "Output frame path")->required();
    generate->add_option("--format", gen.format, "pgm|raw8|raw16le")->capture_default_str();

    AnalyzeOptions ana;
    CLI::App* analyze = app.add_subcommand("analyze", "Evaluate a captured frame");
    analyze->set_config("--config", "", "Key=value file mirroring these flags");
    analyze->add_option("--input", ana.input, "Frame to analyze")->required();
    analyze->add_option("--format", ana.format, "pgm|raw8|raw16le")->capture_default_str();
    analyze->add_option("--size", ana.size, "WIDTHxHEIGHT (raw formats only)");
    analyze->add_option("--bit-depth", ana.bit_depth, "Bits per sample (raw formats only)")
        ->capture_default_str()
        ->check(CLI::Range(1, 16));
    analyze->add_option("--tests", ana.tests, "Comma list of noise,adc,analog,spectral,sync or all")
        ->required()
        ->delimiter(',');
    analyze->add_option("--orientation", ana.orientation, "Spectral direction: rows|columns")
        ->capture_default_str();
    analyze->add_flag("--sync-subpixel", ana.sync_subpixel,
                      "Interpolate transition points between samples");
    add_threshold_options(analyze, ana.thresholds);
    analyze->add_option("--out", ana.out, "Report output path");
    analyze->add_option("--report-format", ana.report_format, "json|text|csv-bundle")
        ->capture_default_str();
    analyze->add_flag("--quiet", ana.quiet, "Suppress the text summary on stdout");

    ReportOptions rep;
    CLI::App* report = app.add_subcommand("report", "Re-render a stored JSON report");
    report->add_option("--in", rep.in, "Stored report.json")->required();
    report->add_option("--format", rep.format, "text|json|csv-bundle")->capture_default_str();
    report->add_option("--out", rep.out, "Output path (required for csv-bundle)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        // --help and --version land here with Success exit codes.
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (generate->parsed()) return run_generate(gen);
        if (analyze->parsed()) return run_analyze(ana);
        return run_report(rep);
    } catch (const Error& e) {
        std::cerr << "grabqc: " << error_code_name(e.code()) << ": " << e.what() << "\n";
        return kExitUsage;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace grabqc::cli
