#pragma once

#include <ostream>

namespace l1ksvm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

// Entry point of the l1ksvm tool: prepare, synth, run, cv, report, plot.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace l1ksvm::cli
