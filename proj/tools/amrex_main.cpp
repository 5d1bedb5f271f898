#include <iostream>
#include <string>
#include <vector>

#include "amrex/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return amrex::cli::dispatch(args, std::cout, std::cerr);
}
