#include "msrmp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return msrmp::run_cli(args, std::cout, std::cerr);
}
