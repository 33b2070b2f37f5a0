#include "cak/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return cak::run_cli(argc, argv, std::cout, std::cerr);
}
