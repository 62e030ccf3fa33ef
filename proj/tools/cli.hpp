#pragma once

#include <string>
#include <vector>

namespace plap::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kNotConverged = 3,
  kDisconnected = 4,
  kIoError = 5,
};

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs one command line (args[0] is the program name) and returns its exit code.
int run(const std::vector<std::string>& args);

}  // namespace plap::cli
