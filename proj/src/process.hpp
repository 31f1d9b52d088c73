#pragma once

#include <string>
#include <vector>

namespace coedit::detail {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs argv[0] (searched on PATH) without a shell and captures both streams.
// Throws Error(Io) if the process cannot be started.
ProcessResult run_capture(const std::vector<std::string>& argv);

}  // namespace coedit::detail
