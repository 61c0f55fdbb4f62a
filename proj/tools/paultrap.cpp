#include "paultrap/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return paultrap::cli::run(argc, argv, std::cout, std::cerr);
}
