#include <iostream>
#include <string>
#include <vector>

#include "feathom/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return feathom::cli::run(args, std::cout, std::cerr);
}
