#include <iostream>
#include <string>
#include <vector>

#include "mhsos/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mhsos::dispatch(args, std::cout, std::cerr);
}
