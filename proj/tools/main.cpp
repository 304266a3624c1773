#include "iontele/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return iontele::cli::run_cli(argc, argv, std::cout, std::cerr);
}
