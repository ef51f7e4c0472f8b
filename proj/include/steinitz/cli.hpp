#pragma once
// Front end of steinitz_lab: subcommands analyze, rearrange, diagnose,
// counterexample and batch.

#include <iosfwd>
#include <string>
#include <vector>

namespace steinitz::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParse = 2,
  kDivergent = 3,
  kNotInDomain = 4,
  kUndecidable = 5,
  kReplayFailure = 6,
};

// args excludes the program name. Reports go to --output when given, else to
// `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace steinitz::cli
