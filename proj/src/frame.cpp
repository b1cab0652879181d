#include "grabqc/frame.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace grabqc {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_frame: return "invalid-frame";
    case ErrorCode::sample_out_of_range: return "sample-out-of-range";
    case ErrorCode::file_not_found: return "file-not-found";
    case ErrorCode::malformed_header: return "malformed-header";
    case ErrorCode::size_mismatch: return "size-mismatch";
    case ErrorCode::unwritable_path: return "unwritable-path";
    case ErrorCode::depth_incompatible_format: return "depth-incompatible-format";
    case ErrorCode::invalid_spec: return "invalid-spec";
    case ErrorCode::invalid_model: return "invalid-model";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::all_zero_histogram: return "all-zero-histogram";
    case ErrorCode::degenerate_histogram: return "degenerate-histogram";
    case ErrorCode::frame_smaller_than_block: return "frame-smaller-than-block";
    case ErrorCode::not_bimodal: return "not-bimodal";
    case ErrorCode::line_too_short: return "line-too-short";
    case ErrorCode::inconsistent_transition_count: return "inconsistent-transition-count";
    case ErrorCode::report_parse_error: return "report-parse-error";
    }
    return "unknown";
}

Frame::Frame(int width, int height, int bit_depth, std::vector<std::uint16_t> samples)
    : width_(width), height_(height), bit_depth_(bit_depth), samples_(std::move(samples)) {
    if (width_ < 2 || height_ < 2)
        throw Error(ErrorCode::invalid_frame,
                    "frame dimensions must be at least 2x2, got " + std::to_string(width_) + "x" +
                        std::to_string(height_));
    if (bit_depth_ < 1 || bit_depth_ > 16)
        throw Error(ErrorCode::invalid_frame,
                    "bit depth must be in [1,16], got " + std::to_string(bit_depth_));
    if (samples_.size() != static_cast<std::size_t>(width_) * height_)
        throw Error(ErrorCode::invalid_frame,
                    "sample count " + std::to_string(samples_.size()) + " does not match " +
                        std::to_string(width_) + "x" + std::to_string(height_));
    const std::uint16_t max = max_code();
    for (std::uint16_t s : samples_)
        if (s > max)
            throw Error(ErrorCode::sample_out_of_range,
                        "sample " + std::to_string(s) + " exceeds max code " + std::to_string(max));
}

namespace {

void validate_raw_spec(const FormatSpec& spec) {
    if (spec.width < 2 || spec.height < 2)
        throw Error(ErrorCode::invalid_spec, "raw formats require explicit dimensions >= 2x2");
    if (spec.bit_depth < 1 || spec.bit_depth > 16)
        throw Error(ErrorCode::invalid_spec, "raw formats require bit depth in [1,16]");
    if (spec.kind == FormatKind::raw8 && spec.bit_depth > 8)
        throw Error(ErrorCode::depth_incompatible_format,
                    "raw8 cannot carry bit depth " + std::to_string(spec.bit_depth));
}

// Next whitespace-separated token, skipping '#' comments per PNM convention.
std::string next_pgm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int parse_header_int(const std::string& tok, const char* what) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw Error(ErrorCode::malformed_header, std::string("bad PGM ") + what + ": '" + tok + "'");
    long v = std::stol(tok);
    if (v <= 0 || v > 0x10000)
        throw Error(ErrorCode::malformed_header,
                    std::string("PGM ") + what + " out of range: " + tok);
    return static_cast<int>(v);
}

Frame load_pgm(std::ifstream& in, const std::filesystem::path& path) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5')
        throw Error(ErrorCode::malformed_header, "not a binary PGM (P5): " + path.string());

    const int width = parse_header_int(next_pgm_token(in), "width");
    const int height = parse_header_int(next_pgm_token(in), "height");
    const std::string maxval_tok = next_pgm_token(in);
    if (maxval_tok.empty() || maxval_tok.find_first_not_of("0123456789") != std::string::npos)
        throw Error(ErrorCode::malformed_header, "bad PGM maxval: '" + maxval_tok + "'");
    const long maxval = std::stol(maxval_tok);
    if (maxval <= 0 || maxval > 65535)
        throw Error(ErrorCode::malformed_header, "PGM maxval out of range: " + maxval_tok);
    // The single whitespace byte terminating the header was consumed by the
    // tokenizer; sample data starts here.

    const int bit_depth = std::bit_width(static_cast<unsigned>(maxval));
    const std::size_t count = static_cast<std::size_t>(width) * height;
    const int bytes_per_sample = maxval < 256 ? 1 : 2;

    std::vector<unsigned char> bytes(count * bytes_per_sample);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size())
        throw Error(ErrorCode::size_mismatch,
                    "PGM payload truncated: expected " + std::to_string(bytes.size()) +
                        " bytes in " + path.string());

    std::vector<std::uint16_t> samples(count);
    if (bytes_per_sample == 1) {
        for (std::size_t k = 0; k < count; ++k) samples[k] = bytes[k];
    } else {
        for (std::size_t k = 0; k < count; ++k)
            samples[k] = static_cast<std::uint16_t>((bytes[2 * k] << 8) | bytes[2 * k + 1]);
    }
    for (std::uint16_t s : samples)
        if (s > maxval)
            throw Error(ErrorCode::sample_out_of_range,
                        "sample " + std::to_string(s) + " exceeds PGM maxval " +
                            std::to_string(maxval));
    return Frame(width, height, bit_depth, std::move(samples));
}

Frame load_raw(std::ifstream& in, const std::filesystem::path& path, const FormatSpec& spec) {
    validate_raw_spec(spec);
    const std::size_t count = static_cast<std::size_t>(spec.width) * spec.height;
    const int bytes_per_sample = spec.kind == FormatKind::raw8 ? 1 : 2;
    const std::size_t expected = count * bytes_per_sample;

    in.seekg(0, std::ios::end);
    const auto file_size = static_cast<std::size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    if (file_size != expected)
        throw Error(ErrorCode::size_mismatch,
                    path.string() + " holds " + std::to_string(file_size) + " bytes, expected " +
                        std::to_string(expected) + " for " + std::to_string(spec.width) + "x" +
                        std::to_string(spec.height));

    std::vector<unsigned char> bytes(expected);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(expected));

    std::vector<std::uint16_t> samples(count);
    if (bytes_per_sample == 1) {
        for (std::size_t k = 0; k < count; ++k) samples[k] = bytes[k];
    } else {
        for (std::size_t k = 0; k < count; ++k)
            samples[k] = static_cast<std::uint16_t>(bytes[2 * k] | (bytes[2 * k + 1] << 8));
    }
    const std::uint16_t max = static_cast<std::uint16_t>((1u << spec.bit_depth) - 1u);
    for (std::uint16_t s : samples)
        if (s > max)
            throw Error(ErrorCode::sample_out_of_range,
                        "sample " + std::to_string(s) + " exceeds max code " + std::to_string(max) +
                            " for bit depth " + std::to_string(spec.bit_depth));
    return Frame(spec.width, spec.height, spec.bit_depth, std::move(samples));
}

} // namespace

Frame load_frame(const std::filesystem::path& path, const FormatSpec& spec) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::file_not_found, "cannot open " + path.string());
    if (spec.kind == FormatKind::pgm_binary) return load_pgm(in, path);
    return load_raw(in, path, spec);
}

void save_frame(const Frame& frame, const std::filesystem::path& path, const FormatSpec& spec) {
    if (spec.kind == FormatKind::raw8 && frame.bit_depth() > 8)
        throw Error(ErrorCode::depth_incompatible_format,
                    "raw8 cannot carry a " + std::to_string(frame.bit_depth()) + "-bit frame");

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::unwritable_path, "cannot write " + path.string());

    std::vector<unsigned char> bytes;
    const auto samples = frame.samples();
    switch (spec.kind) {
    case FormatKind::pgm_binary: {
        const unsigned maxval = frame.max_code();
        std::ostringstream header;
        header << "P5\n" << frame.width() << ' ' << frame.height() << '\n' << maxval << '\n';
        const std::string h = header.str();
        out.write(h.data(), static_cast<std::streamsize>(h.size()));
        if (maxval < 256) {
            bytes.reserve(samples.size());
            for (std::uint16_t s : samples) bytes.push_back(static_cast<unsigned char>(s));
        } else {
            bytes.reserve(samples.size() * 2);
            for (std::uint16_t s : samples) {
                bytes.push_back(static_cast<unsigned char>(s >> 8));
                bytes.push_back(static_cast<unsigned char>(s & 0xff));
            }
        }
        break;
    }
    case FormatKind::raw8:
        bytes.reserve(samples.size());
        for (std::uint16_t s : samples) bytes.push_back(static_cast<unsigned char>(s));
        break;
    case FormatKind::raw16le:
        bytes.reserve(samples.size() * 2);
        for (std::uint16_t s : samples) {
            bytes.push_back(static_cast<unsigned char>(s & 0xff));
            bytes.push_back(static_cast<unsigned char>(s >> 8));
        }
        break;
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error(ErrorCode::unwritable_path, "write failed: " + path.string());
}

Frame transposed(const Frame& frame) {
    std::vector<std::uint16_t> samples(frame.pixel_count());
    const int w = frame.width();
    const int h = frame.height();
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
            samples[static_cast<std::size_t>(j) * h + i] = frame.at(i, j);
    return Frame(h, w, frame.bit_depth(), std::move(samples));
}

std::string content_digest(const Frame& frame) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    auto mix = [&hash](unsigned char byte) {
        hash ^= byte;
        hash *= 0x100000001b3ull;
    };
    auto mix32 = [&mix](std::uint32_t v) {
        for (int k = 0; k < 4; ++k) mix(static_cast<unsigned char>((v >> (8 * k)) & 0xff));
    };
    mix32(static_cast<std::uint32_t>(frame.width()));
    mix32(static_cast<std::uint32_t>(frame.height()));
    mix32(static_cast<std::uint32_t>(frame.bit_depth()));
    for (std::uint16_t s : frame.samples()) {
        mix(static_cast<unsigned char>(s & 0xff));
        mix(static_cast<unsigned char>(s >> 8));
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

} // namespace grabqc
