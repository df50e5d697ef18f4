#include <iostream>

#include "pidkit/cli.hpp"

int main(int argc, char** argv) {
  return pidkit::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
