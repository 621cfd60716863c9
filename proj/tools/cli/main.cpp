#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) { return mlsa::cli::cli_main(argc, argv, std::cout, std::cerr); }
