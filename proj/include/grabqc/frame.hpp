#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "grabqc/error.hpp"

namespace grabqc {

/// A captured (or synthesized) image: a row-major grid of integer grey
/// codes e(i,j), line i running top to bottom, column j left to right.
/// Immutable after construction; all analyzers treat it as a value.
class Frame {
public:
    Frame(int width, int height, int bit_depth, std::vector<std::uint16_t> samples);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int bit_depth() const noexcept { return bit_depth_; }

    /// Largest representable grey code, 2^bit_depth - 1.
    std::uint16_t max_code() const noexcept {
        return static_cast<std::uint16_t>((1u << bit_depth_) - 1u);
    }

    std::uint16_t at(int line, int column) const {
        return samples_[static_cast<std::size_t>(line) * width_ + column];
    }

    std::span<const std::uint16_t> line(int i) const {
        return {samples_.data() + static_cast<std::size_t>(i) * width_,
                static_cast<std::size_t>(width_)};
    }

    std::span<const std::uint16_t> samples() const noexcept { return samples_; }
    std::size_t pixel_count() const noexcept { return samples_.size(); }

    bool operator==(const Frame&) const = default;

private:
    int width_;
    int height_;
    int bit_depth_;
    std::vector<std::uint16_t> samples_;
};

enum class FormatKind { pgm_binary, raw8, raw16le };

/// How to interpret bytes on disk. Raw kinds carry no header, so the
/// dimensions and bit depth must be supplied here; pgm_binary takes them
/// from the file header and ignores these fields.
struct FormatSpec {
    FormatKind kind = FormatKind::pgm_binary;
    int width = 0;
    int height = 0;
    int bit_depth = 8;
};

/// Reads a frame from disk.
///
/// PGM (P5): header "P5\n<width> <height>\n<maxval>\n" followed by binary
/// samples, one byte per sample if maxval < 256, two big-endian bytes
/// otherwise. The frame's bit depth is the bit width of maxval.
/// raw8 / raw16le: headerless row-major dump, top line first; 16-bit
/// samples are little-endian. File length must match exactly.
Frame load_frame(const std::filesystem::path& path, const FormatSpec& spec);

/// Writes a frame. save_frame followed by load_frame with the same spec
/// reproduces the frame bit-exactly. raw8 and pgm with bit_depth > 8 use
/// two-byte samples as described above; raw8 rejects frames deeper than
/// 8 bits.
void save_frame(const Frame& frame, const std::filesystem::path& path, const FormatSpec& spec);

/// Swaps lines and columns; used to run line-oriented analyses down the
/// columns instead.
Frame transposed(const Frame& frame);

/// FNV-1a 64-bit digest over dimensions, depth and sample bytes; used to
/// identify the analyzed frame in reports.
std::string content_digest(const Frame& frame);

} // namespace grabqc
