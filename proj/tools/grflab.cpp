#include <iostream>
#include <string>
#include <vector>

#include "grf/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return grf::app::run(args, std::cout, std::cerr);
}
