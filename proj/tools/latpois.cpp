#include <iostream>

#include "latpois/cli.hpp"

int main(int argc, char** argv) {
  return latpois::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
