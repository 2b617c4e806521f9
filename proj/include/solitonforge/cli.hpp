#pragma once

#include <ostream>
#include <span>
#include <string>

namespace sf {

/// Run the command-line driver. Returns the process exit code:
/// 0 = all checks pass, 1 = a check failed, 2 = schema/expression/usage
/// error, 3 = numerical domain error (singular metric, invalid point).
int cli_run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace sf
