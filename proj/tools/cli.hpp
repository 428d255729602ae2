#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stable_psr::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kDomain = 3, kNumeric = 4 };

// args excludes the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct Grid {
    std::vector<double> values;
};
// "start:stop[:count]"; without count the step is 1
Grid parse_grid(const std::string& spec, bool log_spacing);

}  // namespace stable_psr::cli
