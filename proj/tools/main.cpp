#include <iostream>

#include "teamcount/cli.hpp"

int main(int argc, char** argv) {
  return teamcount::dispatch(argc, argv, std::cout, std::cerr);
}
