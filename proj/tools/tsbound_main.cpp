#include "tsbound_cli.hpp"

int main(int argc, char** argv) { return trotter::cli::run(argc, argv); }
