#include <iostream>

#include "torus_rh/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return torus_rh::cli::run(args, std::cout, std::cerr);
}
