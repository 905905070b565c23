#include "tsbound_cli.hpp"

#include <cstdio>

namespace trotter::cli {

int run(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::fprintf(stderr, "tsbound: not wired yet\n");
  return 4;
}

}  // namespace trotter::cli
