#include <iostream>

#include "vacuumflow/cli.h"

int main(int argc, char** argv) { return vacuumflow::dispatch(argc, argv, std::cout, std::cerr); }
