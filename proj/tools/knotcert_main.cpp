#include <iostream>
#include <vector>

#include "knotcert/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return knotcert::cli::run(args, std::cout, std::cerr);
}
