#ifndef DGUM_CLI_HPP
#define DGUM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dgum::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name. Bad flags return
/// kExitUsage with usage on `err`; runtime failures return kExitFailure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace dgum::cli

#endif  // DGUM_CLI_HPP
