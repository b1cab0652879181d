#pragma once

#include <string>
#include <vector>

namespace grabqc::cli {

/// Entry point behind the grabqc binary. Exit codes: 0 all requested
/// verdicts pass, 1 a verdict failed or a test errored, 2 usage or
/// input error.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

} // namespace grabqc::cli
