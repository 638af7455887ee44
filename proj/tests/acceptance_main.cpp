// Acceptance suite runner: one pass/fail line per criterion, nonzero exit on
// any failure. Registered with ctest; also reachable as `kslab check`.
#include "kslab/acceptance.hpp"

#include <cstring>
#include <iostream>

int main(int argc, char** argv)
{
    std::string only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = argv[++i];
    }
    const bool ok = kslab::run_acceptance(only, std::cout);
    return ok ? 0 : 1;
}
