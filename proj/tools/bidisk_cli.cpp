#include <iostream>
#include <string>
#include <vector>

#include "bidisk/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto oc = bidisk::cli::run(args);
  std::cout << oc.out;
  std::cerr << oc.err;
  return oc.exit_code;
}
