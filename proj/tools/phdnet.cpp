#include <iostream>
#include <string>
#include <vector>

#include "phdnet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return phdnet::cli::run(args, std::cout, std::cerr);
}
