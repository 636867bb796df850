#include <iostream>
#include <string>
#include <vector>

#include "genbound/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return genbound::cli::run(args, std::cout, std::cerr);
}
