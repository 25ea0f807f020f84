#include <iostream>
#include <string>
#include <vector>

#include "volcone/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return volcone::cli::run(args, std::cout, std::cerr);
}
