#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage or invalid
// argument, 2 spec validation error, 3 hypothesis violation.

#include <ostream>
#include <string>
#include <vector>

namespace bconv {

inline constexpr const char* kToolVersion = "1.0.0";

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bconv
