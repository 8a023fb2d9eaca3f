#include "photonrl/envs/bandit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace photonrl {

void FlatBanditSpec::validate() const {
    if (modes_exponent < 1 || modes_exponent > 20)
        throw std::invalid_argument("FlatBanditSpec: modes_exponent must be in [1, 20]");
    // Exactly two rewarded arms: mode 1 plus a distinct second one.
    if (rewarded_mode < 2 || rewarded_mode > arm_count())
        throw std::invalid_argument("FlatBanditSpec: rewarded_mode must be in [2, " +
                                    std::to_string(arm_count()) + "]");
    if (!(reward >= 0.0) || !std::isfinite(reward))
        throw std::invalid_argument("FlatBanditSpec: reward must be finite and >= 0");
}

FlatTwoArmBandit::FlatTwoArmBandit(FlatBanditSpec spec) : spec_(spec) { spec_.validate(); }

int FlatTwoArmBandit::reset() {
    done_ = false;
    return 0;
}

StepResult FlatTwoArmBandit::step(int action) {
    if (done_) throw std::logic_error("FlatTwoArmBandit: step() after episode end");
    if (action < 0 || action >= spec_.arm_count())
        throw std::out_of_range("FlatTwoArmBandit: action out of range");
    done_ = true;
    const int mode = action + 1;  // 1-based arm label
    double reward = (mode == 1 || mode == spec_.rewarded_mode) ? spec_.reward : 0.0;
    return {0, reward, true};
}

int FactorizedBanditSpec::arm_count() const {
    int n = 1;
    for (int s : subspace_sizes) n *= s;
    return n;
}

std::vector<int> FactorizedBanditSpec::decode(int action) const {
    std::vector<int> sub(subspace_sizes.size());
    for (std::size_t i = subspace_sizes.size(); i-- > 0;) {
        sub[i] = action % subspace_sizes[i];
        action /= subspace_sizes[i];
    }
    return sub;
}

double FactorizedBanditSpec::reward_of(int action) const {
    std::vector<int> sub = decode(action);
    double total = (combine == Combine::Sum) ? 0.0 : 1.0;
    for (std::size_t i = 0; i < sub.size(); ++i) {
        double r = tables[i][static_cast<std::size_t>(sub[i])];
        if (combine == Combine::Sum)
            total += r;
        else
            total *= r;
    }
    return total;
}

void FactorizedBanditSpec::validate() const {
    if (subspace_sizes.empty())
        throw std::invalid_argument("FactorizedBanditSpec: need at least one subspace");
    for (int s : subspace_sizes)
        if (s < 1) throw std::invalid_argument("FactorizedBanditSpec: subspace sizes must be >= 1");
    if (tables.size() != subspace_sizes.size())
        throw std::invalid_argument("FactorizedBanditSpec: one reward table per subspace required");
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (tables[i].size() != static_cast<std::size_t>(subspace_sizes[i]))
            throw std::invalid_argument("FactorizedBanditSpec: table " + std::to_string(i + 1) +
                                        " size does not match its subspace");
        for (double r : tables[i])
            if (!(r >= 0.0) || !std::isfinite(r))
                throw std::invalid_argument(
                    "FactorizedBanditSpec: rewards must be finite and >= 0");
    }
    if (arm_count() > (1 << 20))
        throw std::invalid_argument("FactorizedBanditSpec: action space too large");
}

FactorizedBanditSpec factorized_preset(double x, double epsilon) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("factorized_preset: x must be in [0, 1]");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("factorized_preset: epsilon must be finite and >= 0");
    FactorizedBanditSpec spec;
    spec.subspace_sizes = {2, 4, 2};
    const double z = 1.0 / (2.0 - 2.0 * x + 2.0 * x * x);
    spec.tables = {
        {epsilon * 0.95, epsilon * 0.05},
        {0.0, epsilon * z * x * x, epsilon * z, epsilon * z * (1.0 - x) * (1.0 - x)},
        {epsilon * 0.05, epsilon * 0.95},
    };
    return spec;
}

FactorizedBandit::FactorizedBandit(FactorizedBanditSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
}

int FactorizedBandit::reset() {
    done_ = false;
    return 0;
}

StepResult FactorizedBandit::step(int action) {
    if (done_) throw std::logic_error("FactorizedBandit: step() after episode end");
    if (action < 0 || action >= spec_.arm_count())
        throw std::out_of_range("FactorizedBandit: action out of range");
    done_ = true;
    return {0, spec_.reward_of(action), true};
}

}  // namespace photonrl
