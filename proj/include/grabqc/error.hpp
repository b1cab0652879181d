#pragma once

#include <stdexcept>
#include <string>

namespace grabqc {

enum class ErrorCode {
    invalid_frame,
    sample_out_of_range,
    file_not_found,
    malformed_header,
    size_mismatch,
    unwritable_path,
    depth_incompatible_format,
    invalid_spec,
    invalid_model,
    invalid_argument,
    all_zero_histogram,
    degenerate_histogram,
    frame_smaller_than_block,
    not_bimodal,
    line_too_short,
    inconsistent_transition_count,
    report_parse_error,
};

/// Exception carrying a machine-checkable error code alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

} // namespace grabqc
