#include <iostream>
#include <string>
#include <vector>

#include "ctower/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ctower::run_cli(args, std::cout, std::cerr);
}
