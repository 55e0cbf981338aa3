#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gazeaes::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // work started and something failed
inline constexpr int kExitUsage = 2;    // bad flags, bad config, refused output dir

/// Entry point of the gazeaes tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gazeaes::cli
