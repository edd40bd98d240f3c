#include <iostream>

#include "lowtail/cli.hpp"

int main(int argc, char** argv) { return lowtail::main_entry(argc, argv, std::cout, std::cerr); }
