#include <iostream>

#include "noether/cli.hpp"

int main(int argc, char** argv) {
  noether::cli::RunConfig config;
  if (auto code = noether::cli::parse_command_line(argc, argv, config, std::cout, std::cerr)) {
    return *code;
  }
  return noether::cli::run(config, std::cout, std::cerr);
}
