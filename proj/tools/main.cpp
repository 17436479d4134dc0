#include <iostream>
#include <string>
#include <vector>

#include "rewr/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rewr::run(args, std::cin, std::cout, std::cerr);
}
