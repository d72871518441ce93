#pragma once

#include <string>
#include <vector>

namespace stackyfan {

struct CommandResult {
  /// 0 success, 1 domain or validation error, 2 usage or parse error.
  int exit_code = 0;
  std::string out;
  std::string err;
};

/// Runs the command line `args` (program name first) and captures its output.
CommandResult run_command(const std::vector<std::string> &args);

} // namespace stackyfan
