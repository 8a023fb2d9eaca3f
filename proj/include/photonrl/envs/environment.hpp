#pragma once

namespace photonrl {

struct StepResult {
    int percept = 0;
    double reward = 0.0;
    bool done = false;
};

// Reset/step contract shared by all task environments. Instances are
// deterministic given their construction parameters, serve a single agent,
// and raise std::logic_error on step() after an episode has finished.
class Environment {
public:
    virtual ~Environment() = default;

    // Starts a new episode and returns the initial percept id.
    virtual int reset() = 0;

    virtual StepResult step(int action) = 0;

    virtual int action_count() const = 0;

    // Size of the percept id space (ids are dense in [0, percept_count)).
    virtual int percept_count() const = 0;
};

}  // namespace photonrl
