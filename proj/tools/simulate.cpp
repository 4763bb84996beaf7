#include <iostream>
#include <string>
#include <vector>

#include "wyner/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wyner::cli::run(args, std::cout, std::cerr);
}
