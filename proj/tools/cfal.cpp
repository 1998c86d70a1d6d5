#include <iostream>

#include "cfal/cli.hpp"

int main(int argc, char** argv)
{
    return cfal::cli::run(argc, argv, std::cout, std::cerr);
}
