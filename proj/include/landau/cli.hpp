#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace landau {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Invariant suite behind `landau verify`: oracle equivalence, trace and
/// divergence identities, conservation, entropy, steady state, exponent algebra.
std::vector<CheckResult> invariant_suite(int n, double extent);

/// Exit codes: 0 success, 1 verification failure, 2 usage error or missing input.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace landau
