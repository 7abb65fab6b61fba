#include <iostream>
#include <string>
#include <vector>

#include "boinit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return boinit::cli::main(args, std::cout, std::cerr);
}
