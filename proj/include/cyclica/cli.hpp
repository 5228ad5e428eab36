#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cyclica {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 1 NonCyclic under --strict, 2 input error,
// 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cyclica
