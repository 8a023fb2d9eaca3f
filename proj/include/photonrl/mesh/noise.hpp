#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "photonrl/rng.hpp"

namespace photonrl {

// When Gaussian phase noise is injected.
//   PerAdjustment: a draw is added each time a phase is written into the
//                  device; the noisy value persists until the next write.
//   PerShot:       a fresh draw perturbs each node on every photon traversal.
enum class NoiseMode { PerAdjustment, PerShot };

struct NoiseSpec {
    double sigma = 0.0;  // std dev of the phase noise, radians
    NoiseMode mode = NoiseMode::PerAdjustment;

    bool enabled() const { return sigma > 0.0; }

    void validate() const {
        if (!(sigma >= 0.0) || !std::isfinite(sigma))
            throw std::invalid_argument("NoiseSpec: sigma must be finite and >= 0");
    }
};

// theta + N(0, sigma^2), clamped to [0, pi/2]. With sigma = 0 the input is
// returned unchanged and the generator is not consumed, so a zero-noise
// pipeline is bit-identical to one that never calls this.
inline double perturb_phase(double theta, const NoiseSpec& noise, Rng& rng) {
    noise.validate();
    if (noise.sigma == 0.0) return theta;
    double noisy = theta + noise.sigma * rng.gaussian();
    return std::clamp(noisy, 0.0, std::numbers::pi / 2.0);
}

}  // namespace photonrl
