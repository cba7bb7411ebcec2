// Acceptance runner: one pass/fail line per criterion; exit 1 on any failure.

#include <iostream>

#include "graphonlab/acceptance.hpp"

int main() {
    auto results = graphonlab::run_acceptance(&std::cout);
    int failed = 0;
    for (const auto& r : results) failed += !r.pass;
    std::cout << (failed ? "ACCEPTANCE: FAIL (" : "ACCEPTANCE: PASS (") << results.size() - failed
              << "/" << results.size() << " criteria)\n";
    return failed ? 1 : 0;
}
