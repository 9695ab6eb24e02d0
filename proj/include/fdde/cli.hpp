#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fdde {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int mismatch = 1;  // a reproduced verdict differs from the expected one
inline constexpr int usage = 2;     // bad arguments, configuration or domain errors
} // namespace exit_code

/// Runs the fdde-atlas command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fdde
