#include <iostream>

#include "shimura/cli.hpp"

int main(int argc, char** argv)
{
    return shimura::cli::run(argc, argv, std::cout, std::cerr);
}
