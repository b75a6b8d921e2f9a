#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pnet {

// Parses and runs one CLI invocation (without the program name).
// Exit codes: 0 success, 1 input or validation error, 2 resource limit hit.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pnet
