#include <iostream>

#include "pts/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return pts::run(args, std::cout, std::cerr);
}
