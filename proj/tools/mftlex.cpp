#include <iostream>
#include <string>
#include <vector>

#include "mftlex/cli.hpp"

int main(int argc, char** argv) {
  return mftlex::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
