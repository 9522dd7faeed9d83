#include <iostream>

#include "lab.hpp"

int main(int argc, char** argv)
{
    return gdag::lab::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
