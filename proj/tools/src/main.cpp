#include <iostream>

#include "cli.hpp"

extern char** environ;

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return ase::cli::run_cli(args, std::cin, std::cout, std::cerr, environ);
}
