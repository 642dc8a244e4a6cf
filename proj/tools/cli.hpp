#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fvv::cli {

/// Entry point shared by the executable and the tests. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1s", "5m", "2.5" (seconds) to seconds.
double parse_duration(const std::string& s);

}  // namespace fvv::cli
