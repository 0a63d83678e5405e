#include <iostream>
#include <string>
#include <vector>

#include "suprec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return suprec::run_cli(args, std::cout, std::cerr);
}
