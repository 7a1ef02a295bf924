#include <iostream>
#include <string>
#include <vector>

#include "listreward/commands.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return listreward::cli::run(args, std::cout, std::cerr);
}
