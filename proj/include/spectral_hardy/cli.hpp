#pragma once

// Command-line front end.  Exit codes: 0 success, 1 usage or input error,
// 2 indeterminate result (marginal or unconverged classification, failed check).

#include <iosfwd>

namespace spectral_hardy::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIndeterminate = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spectral_hardy::cli
