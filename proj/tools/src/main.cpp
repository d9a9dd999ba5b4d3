#include <iostream>

#include "suppkg/cli.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return suppkg::cli::run(argc, argv, std::cout, std::cerr);
}
