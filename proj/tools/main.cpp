#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return aiscell::cli::run(argc, argv, std::cerr); }
