#include <iostream>
#include <string>
#include <vector>

#include "sympopt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sympopt::cli::run_main(args, std::cout, std::cerr);
}
