#pragma once

namespace vkm {

/// Exit codes of the command line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,       // bad arguments, unreadable or malformed input
  kExitValidation = 2,  // kernel axioms or a verified contract failed
  kExitDegenerate = 3,  // the measure has empty support
};

/// Entry point of `vkmercer`; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace vkm
