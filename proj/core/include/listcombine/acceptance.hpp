#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "listcombine/simulation.hpp"

namespace listcombine {

/// Scales the Monte Carlo sizes of the acceptance checks. 1.0 runs the full
/// published sizes; smaller values shrink replicate counts and widen the
/// purely Monte Carlo tolerance bands accordingly (the arithmetic checks are
/// never relaxed).
struct AcceptanceScale {
    double replicates = 1.0;
};

struct CriterionResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs the twelve statistical acceptance checks and returns one line each.
std::vector<CriterionResult> run_acceptance(const AcceptanceScale& scale,
                                            std::uint64_t seed,
                                            ParallelConfig parallel = {});

} // namespace listcombine
