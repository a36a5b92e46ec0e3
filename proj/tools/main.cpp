// main.cpp - cqed command-line entry point

#include <iostream>

#include "app/commands.hpp"

int main(int argc, char** argv) {
    return cqed::app::run_cli(argc, argv, std::cout, std::cerr);
}
