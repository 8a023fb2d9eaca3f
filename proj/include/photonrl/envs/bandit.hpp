#pragma once

#include <vector>

#include "photonrl/envs/environment.hpp"

namespace photonrl {

// Single-state bandit with 2^d arms and exactly two rewarded ones: arm 1 and
// arm `rewarded_mode` (both 1-based). rewarded_mode = 2 puts the second
// rewarded arm next to the first; rewarded_mode = 2^d puts it as far away in
// the tree as possible.
struct FlatBanditSpec {
    int modes_exponent = 3;  // d; 2^d arms
    int rewarded_mode = 8;   // m, 1-based
    double reward = 0.025;

    int arm_count() const { return 1 << modes_exponent; }
    void validate() const;
};

class FlatTwoArmBandit final : public Environment {
public:
    explicit FlatTwoArmBandit(FlatBanditSpec spec);

    int reset() override;
    StepResult step(int action) override;
    int action_count() const override { return spec_.arm_count(); }
    int percept_count() const override { return 1; }

    const FlatBanditSpec& spec() const { return spec_; }

private:
    FlatBanditSpec spec_;
    bool done_ = true;
};

// Bandit whose action space factorizes into sub-action spaces; one reward
// table per subspace, combined by sum (default) or product. An action id
// decodes into sub-actions in row-major order, the first subspace varying
// slowest.
struct FactorizedBanditSpec {
    enum class Combine { Sum, Product };

    std::vector<int> subspace_sizes{2, 4, 2};
    std::vector<std::vector<double>> tables;  // one table per subspace
    Combine combine = Combine::Sum;

    int arm_count() const;
    std::vector<int> decode(int action) const;  // 0-based sub-action ids
    double reward_of(int action) const;
    void validate() const;
};

// The built-in three-subspace preset, sizes (2, 4, 2):
//   table1    = eps (0.95, 0.05)
//   table2(x) = eps (2 - 2x + 2x^2)^{-1} (0, x^2, 1, (1-x)^2)
//   table3    = eps (0.05, 0.95)
// x in [0, 1] crosses the second subspace's components; eps rescales all
// rewards.
FactorizedBanditSpec factorized_preset(double x, double epsilon);

class FactorizedBandit final : public Environment {
public:
    explicit FactorizedBandit(FactorizedBanditSpec spec);

    int reset() override;
    StepResult step(int action) override;
    int action_count() const override { return spec_.arm_count(); }
    int percept_count() const override { return 1; }

    const FactorizedBanditSpec& spec() const { return spec_; }

private:
    FactorizedBanditSpec spec_;
    bool done_ = true;
};

}  // namespace photonrl
