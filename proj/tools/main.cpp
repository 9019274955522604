#include <iostream>
#include <string>
#include <vector>

#include "diracbound/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return diracbound::cli::run_cli(std::move(args), std::cout, std::cerr);
}
