// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>

namespace cbal {

// Built-in oracle suite: solver-vs-enumeration equivalence, lambda = 0
// reductions, learner gradient checks, balance metric properties,
// scalarization monotonicity, and serial-vs-parallel kernel equality.
// Prints one pass/fail line per check family. inject_fault perturbs one
// check so the failure path can be exercised. Returns true when all pass.
bool run_verification(std::ostream& out, bool inject_fault);

}  // namespace cbal
