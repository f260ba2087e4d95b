#include <iostream>
#include <string>
#include <vector>

#include "netlap/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return netlap::cli::run(args, std::cout, std::cerr);
}
