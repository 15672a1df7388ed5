#include <iostream>
#include <string>
#include <vector>

#include "trevisan/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return trevisan::run_cli(args, std::cout, std::cerr);
}
