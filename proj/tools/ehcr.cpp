#include <iostream>
#include <string>
#include <vector>

#include "ehcr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ehcr::cli::run(args, std::cout, std::cerr);
}
