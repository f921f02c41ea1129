// Standalone acceptance runner: one pass/fail line per criterion, exit 0 iff
// every check passes.
#include <iostream>

#include "umx/acceptance.hpp"

int main() { return umx::run_acceptance(std::cout) == 0 ? 0 : 1; }
