#include <iostream>

#include "gammafilt/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return gammafilt::cli::run(args, std::cout, std::cerr);
}
