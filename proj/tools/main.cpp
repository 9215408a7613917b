#include <iostream>
#include <string>
#include <vector>

#include "nlasim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nlasim::cli::execute(std::move(args), std::cout, std::cerr);
}
