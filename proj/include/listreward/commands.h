#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace listreward::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitJudge = 3;

// Entry point of the listreward tool. `args` excludes the program name.
//   listreward score|eval|convert|reval-multi|serve|report [options]
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace listreward::cli
