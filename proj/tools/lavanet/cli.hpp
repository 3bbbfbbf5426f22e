#pragma once

#include <iosfwd>

namespace lavanet::cli {

/// Exit codes of the lavanet tool.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 1;
inline constexpr int kRuntimeError = 2;

/// Entry point of `lavanet run|info|raster`. Results go to `out` as
/// `key: value` lines, diagnostics to `err`.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lavanet::cli
