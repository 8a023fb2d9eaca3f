#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace photonrl {

// Softmax distribution e^{beta v_i} / sum_j e^{beta v_j}, stabilized by
// subtracting the maximum before exponentiation. beta = 0 yields the exact
// uniform distribution.
inline std::vector<double> softmax_policy(std::span<const double> values, double beta) {
    if (values.empty()) throw std::invalid_argument("softmax_policy: empty values");
    if (!(beta >= 0.0)) throw std::invalid_argument("softmax_policy: beta must be >= 0");
    for (double v : values)
        if (!std::isfinite(v)) throw std::domain_error("softmax_policy: values must be finite");
    double vmax = values[0];
    for (double v : values)
        if (v > vmax) vmax = v;
    std::vector<double> out(values.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = std::exp(beta * (values[i] - vmax));
        sum += out[i];
    }
    for (double& p : out) p /= sum;
    return out;
}

}  // namespace photonrl
