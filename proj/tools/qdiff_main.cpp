#include <iostream>
#include <string>
#include <vector>

#include "qd/cli.hpp"

int main(int argc, char** argv) {
    return qd::cli_run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
