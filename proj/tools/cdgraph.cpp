#include <iostream>

#include "cdgraph/cli.hpp"

int main(int argc, char** argv) {
    return cdgraph::dispatch(argc, argv, std::cout, std::cerr);
}
