#include <iostream>
#include <string>
#include <vector>

#include "abcat/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const abcat::CliResult r = abcat::run_cli(args);
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}
