#ifndef HETCACHE_CLI_H_
#define HETCACHE_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace hetcache {

// Exit codes: 0 success, 1 failed consistency check, 2 bad input.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitBadInput = 2;

// args excludes the program name. Single-dash long flags (-M1, -seed, ...)
// are accepted alongside their double-dash spelling.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hetcache

#endif  // HETCACHE_CLI_H_
