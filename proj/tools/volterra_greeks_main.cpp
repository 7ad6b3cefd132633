#include <vgreeks/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return vgreeks::run_cli(argc, argv, std::cout, std::cerr); }
