#include <dimred/cli.hpp>

#include <iostream>

int main(int argc, char** argv) {
  return dimred::cli::run(argc, argv, std::cout, std::cerr);
}
