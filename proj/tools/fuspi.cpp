#include <iostream>
#include <vector>

#include "fuspi/cli/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fuspi::cli::run_cli(std::move(args), std::cout, std::cerr);
}
