#include <unistd.h>

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace numphase::cli;
  const Terminal terminal{color_enabled(STDOUT_FILENO), color_enabled(STDERR_FILENO)};
  return run(argc, argv, std::cout, std::cerr, terminal);
}
