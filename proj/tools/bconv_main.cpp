#include <iostream>
#include <string>
#include <vector>

#include "bconv/cli.hpp"

int main(int argc, char** argv)
{
    return bconv::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
