// chiral_ed: command-line driver. Writes one CSV per invocation.

#include <fstream>
#include <iostream>
#include <stdexcept>

#include "chiral/cli.hpp"

int main(int argc, char** argv) {
  using namespace chiral::cli;
  RunConfig config;
  try {
    std::string help;
    config = parse_command_line(argc, argv, &help);
    if (config.command.empty()) {
      std::cout << help;
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "chiral_ed: " << e.what() << "\n";
    return 2;
  }

  try {
    const CommandOutput result = run(config);
    if (config.out.empty()) {
      std::cout << result.csv;
    } else {
      std::ofstream out(config.out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + config.out);
      out << result.csv;
    }
    return result.ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "chiral_ed: " << e.what() << "\n";
    return 2;
  }
}
