#include <iostream>

#include "agv/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return agv::run_cli(args, std::cout, std::cerr);
}
