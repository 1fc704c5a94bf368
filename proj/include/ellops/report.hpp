#pragma once

#include <cstdint>
#include <string>

namespace ellops {

// Residual summary of a randomized identity check. max/median are taken over
// the per-sample residuals; the seed reproduces the run exactly.
struct ResidualReport {
    std::string name;
    std::string params;  // human-readable parameter echo
    std::uint64_t seed = 0;
    int samples = 0;
    double max_residual = 0.0;
    double median_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

}  // namespace ellops
