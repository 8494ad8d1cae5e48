#include <iostream>
#include <string>
#include <vector>

#include "spreadlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return spreadlab::dispatch(args, std::cout, std::cerr);
}
