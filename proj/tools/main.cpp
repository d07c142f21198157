#include <iostream>

#include "chiralsim/cli.hpp"

int main(int argc, char** argv)
{
    return chiralsim::cli::run(argc, argv, std::cout, std::cerr);
}
