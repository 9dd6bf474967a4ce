#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace anisoent::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kUsage = 2;
inline constexpr int kFailure = 3;

// args excludes the program name. Reports go to `out` unless --out is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace anisoent::cli
