#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sphsub {

// Exit codes: 0 success / certified, 1 validation, certification or gate
// failure, 2 usage, parse or I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sphsub
