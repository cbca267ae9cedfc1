#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace qd {

// Exit codes: 0 success, 1 invariant failure, 2 incomplete computation,
// 3 invalid or degenerate input.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qd
