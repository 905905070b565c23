#pragma once

namespace trotter::cli {

/// Entry point for the tsbound command line; returns the process exit code
/// (0 success, 2 input error, 3 numerical guard, 4 internal).
int run(int argc, char** argv);

}  // namespace trotter::cli
