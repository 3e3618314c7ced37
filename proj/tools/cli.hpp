#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace maskfill::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for the `maskfill` executable.
int run(int argc, const char* const* argv);
int run(int argc, char** argv);

/// Same as run(), with explicit streams. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maskfill::cli
