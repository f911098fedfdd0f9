#include <iostream>
#include <string>
#include <vector>

#include "reidtrace/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return reidtrace::run(args, std::cout, std::cerr);
}
