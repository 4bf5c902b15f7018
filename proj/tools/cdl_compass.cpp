#include <iostream>

#include "cdl/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cdl::run_cli(args, std::cout, std::cerr);
}
