#pragma once

#include <cstdint>

#include "masmc/rng.hpp"

namespace masmc {

// Single-trial adversary experiments. Each one's success probability is a
// closed form by construction:
//   fragment capture: 1/r     (tap one of r channels, hit the critical one)
//   corrupt dm:       1/m     (the uniformly drawn coordinator is corrupt)
//   wrong agent:      1/m + 1/p - 1/(m*p)   (either event above)
// These are the minimal single-uniform-target models under which the closed
// forms hold exactly; the models are interpretations, chosen to be testable.
enum class ExperimentKind {
    fragment_capture,
    corrupt_dm,
    wrong_agent,
};

struct AdversaryConfig {
    ExperimentKind kind = ExperimentKind::fragment_capture;
    uint32_t fragments_r = 1;
    uint32_t dm_count_m = 1;
    uint32_t agent_count_p = 1;
    uint64_t trials = 1;
    uint64_t seed = 0;

    void validate() const; // DomainError on zero parameters or trials
};

struct McEstimate {
    double p_hat = 0.0;
    double stderr_ = 0.0; // sqrt(p_hat (1 - p_hat) / trials)
    uint64_t trials = 0;
    uint64_t seed = 0;
};

// The adversary taps one of the r fragment channels uniformly; success iff
// it carries the critical fragment (index 0).
bool experiment_fragment_capture(uint32_t r, Substream& rng);

// The task's coordinating decision maker is drawn uniformly from m; DM 0 is
// the corrupt one.
bool experiment_corrupt_dm(uint32_t m, Substream& rng);

// Independent draws of coordinator (corrupt iff 0) and agent (compromised
// iff 0); success iff either event happens.
bool experiment_wrong_agent(uint32_t m, uint32_t p, Substream& rng);

// Closed-form success probability of the configured experiment.
double exact_probability(const AdversaryConfig& config);

// Monte Carlo estimate over config.trials independent trials. Trial i draws
// from substream (seed, "trial", i) only, so any execution order gives the
// same counts. This is the OpenMP kernel.
McEstimate mc_estimate(const AdversaryConfig& config);

// Plain serial loop, kept as the reference the parallel kernel is checked
// against. Must agree with mc_estimate bit for bit.
McEstimate mc_estimate_serial(const AdversaryConfig& config);

} // namespace masmc
