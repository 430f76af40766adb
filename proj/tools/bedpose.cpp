#include <iostream>
#include <string>
#include <vector>

#include "bedpose/cli.hpp"

int main(int argc, char** argv) {
  return bedpose::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cerr);
}
