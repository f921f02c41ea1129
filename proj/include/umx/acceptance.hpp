#ifndef UMX_ACCEPTANCE_HPP
#define UMX_ACCEPTANCE_HPP

#include <ostream>

namespace umx {

// Runs the full validation battery: exact oracle equivalences for the
// symbolic layer and statistically toleranced Monte Carlo cross-checks for
// the sampling layer. Prints one PASS/FAIL line per check (with timing) to
// `out` and returns the number of failed checks.
int run_acceptance(std::ostream& out);

}  // namespace umx

#endif
