#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace liebox::cli {

/// Exit codes: 0 all requested checks passed, 1 a check failed, 2 usage error
/// (bad flags, unknown model, malformed input files).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liebox::cli
