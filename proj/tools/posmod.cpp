#include <iostream>
#include <string>
#include <vector>

#include "posmod/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return posmod::run(args, std::cout, std::cerr);
}
