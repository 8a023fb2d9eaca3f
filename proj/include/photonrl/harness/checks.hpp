#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace photonrl {

struct CheckResult {
    std::string name;
    bool pass = false;
    double observed = 0.0;  // worst deviation measured
    double bound = 0.0;     // tolerance it must stay under
    std::string detail;
};

// Individual verification checks. Each runs a full protocol and reports the
// worst deviation observed against its pinned tolerance.
CheckResult check_equivalence_standard(std::uint64_t seed);  // depths 1..4, 200x100 rewards, 1e-10
CheckResult check_equivalence_softmax(std::uint64_t seed);   // same vs softmax-of-h, 1e-10
CheckResult check_programming_round_trip(std::uint64_t seed);  // 1000 dists, depths 1..6, 1e-12
CheckResult check_mzi_unitarity(std::uint64_t seed);           // U†U = I, 1e-14
CheckResult check_mzi_phase_correspondence(std::uint64_t seed);  // |U11(2θ)|² = sin²θ, 1e-14
CheckResult check_glow_law(std::uint64_t seed);                  // g = (1-η)^δt, 1e-14
CheckResult check_leaf_normalization(std::uint64_t seed);        // Σ leaf p = 1, 1e-12
CheckResult check_defrag_invariance(std::uint64_t seed);         // probability multiset, 1e-12
CheckResult check_softmax_uniformity();                          // β = 0 uniform, exact
CheckResult check_arcsin_tanh_regression();                      // dense-scan constant, 1e-6

// The full battery, in a stable order.
std::vector<CheckResult> run_verification_suites(std::uint64_t seed);

}  // namespace photonrl
