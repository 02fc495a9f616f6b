#pragma once

// conics-lab command-line front end. Kept out of main() so the tests can
// drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace conics::cli {

enum ExitCode { kOk = 0, kUserError = 1, kInternalError = 2 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Folds a --config JSON file into the argument list: a "command" entry picks
/// the subcommand when none is given, every other key becomes --key value
/// unless that flag is already present. Throws conics::Error on a bad file.
std::vector<std::string> merge_config(const std::vector<std::string>& args);

/// Recorded canonical report for k = -1 (order 7).
extern const char* const kGoldenKMinus1;

}  // namespace conics::cli
