#include <iostream>
#include <string>
#include <vector>

#include "wavedecay/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return wavedecay::cli::run(args, std::cout, std::cerr);
}
