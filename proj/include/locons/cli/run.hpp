#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace locons::cli {

enum ExitCode { kOk = 0, kValidation = 1, kNumeric = 2, kParse = 3 };

/// Entry point of the command-line tool; `args` excludes the program name.
/// Primary reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace locons::cli
