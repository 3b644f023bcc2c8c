#pragma once

#include <string>
#include <vector>

#include "rotorpair/config.hpp"

namespace rotorpair {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    std::string note;
};

/// The library's verification suite: bracket axioms, conservation along the
/// matrix flow, the reduced-system oracle agreement, exact-solution tracking,
/// quadrature identities, determinism. Randomized parts use cfg.seed;
/// tolerances come from cfg (verify.* keys) with built-in defaults.
std::vector<CheckResult> run_verification(const RunConfig& cfg);

/// One "name: PASS/FAIL measured=... bound=..." line per check.
std::string format_check_lines(const std::vector<CheckResult>& results);

int count_failures(const std::vector<CheckResult>& results);

} // namespace rotorpair
