// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion.  Exit code 0 iff all run criteria pass.
//
//   acceptance [--quick]
//
// --quick skips the dense eigensolves at p >= 53 (criteria 5, 11, 12, 13).

#include <cstring>
#include <iostream>

#include "markoff/verify.hpp"

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            quick = true;
        } else {
            std::cerr << "usage: acceptance [--quick]\n";
            return 2;
        }
    }
    markoff::AcceptanceSuite suite(quick);
    auto results = suite.run();
    return markoff::print_acceptance(results, std::cout);
}
