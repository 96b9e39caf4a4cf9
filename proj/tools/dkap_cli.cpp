#include <iostream>
#include <string>
#include <vector>

#include "dkap/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dkap::cli::run(args, std::cout, std::cerr);
}
