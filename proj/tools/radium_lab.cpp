#include <iostream>
#include <string>
#include <vector>

#include "radium/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return radium::cli::run(args, std::cout, std::cerr);
}
