#include <iostream>
#include <vector>

#include "drillsim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return drillsim::cli::run(args, std::cout, std::cerr);
}
