#include "masmc/threat.hpp"

#include <cmath>

namespace masmc {

namespace {

bool run_trial(const AdversaryConfig& config, uint64_t trial_index) {
    Substream rng(config.seed, "trial", {trial_index});
    switch (config.kind) {
    case ExperimentKind::fragment_capture:
        return experiment_fragment_capture(config.fragments_r, rng);
    case ExperimentKind::corrupt_dm:
        return experiment_corrupt_dm(config.dm_count_m, rng);
    case ExperimentKind::wrong_agent:
        return experiment_wrong_agent(config.dm_count_m, config.agent_count_p, rng);
    }
    return false;
}

McEstimate estimate_from_hits(const AdversaryConfig& config, uint64_t hits) {
    McEstimate est;
    est.trials = config.trials;
    est.seed = config.seed;
    est.p_hat = static_cast<double>(hits) / static_cast<double>(config.trials);
    est.stderr_ = std::sqrt(est.p_hat * (1.0 - est.p_hat) /
                            static_cast<double>(config.trials));
    return est;
}

} // namespace

void AdversaryConfig::validate() const {
    if (trials < 1) {
        throw DomainError("trials must be >= 1");
    }
    switch (kind) {
    case ExperimentKind::fragment_capture:
        if (fragments_r < 1) {
            throw DomainError("fragments_r must be >= 1");
        }
        break;
    case ExperimentKind::corrupt_dm:
        if (dm_count_m < 1) {
            throw DomainError("dm_count_m must be >= 1");
        }
        break;
    case ExperimentKind::wrong_agent:
        if (dm_count_m < 1 || agent_count_p < 1) {
            throw DomainError("dm_count_m and agent_count_p must be >= 1");
        }
        break;
    }
}

bool experiment_fragment_capture(uint32_t r, Substream& rng) {
    return rng.below(r) == 0;
}

bool experiment_corrupt_dm(uint32_t m, Substream& rng) {
    return rng.below(m) == 0;
}

bool experiment_wrong_agent(uint32_t m, uint32_t p, Substream& rng) {
    const bool coordinator_corrupt = rng.below(m) == 0;
    const bool agent_compromised = rng.below(p) == 0;
    return coordinator_corrupt || agent_compromised;
}

double exact_probability(const AdversaryConfig& config) {
    config.validate();
    switch (config.kind) {
    case ExperimentKind::fragment_capture:
        return 1.0 / config.fragments_r;
    case ExperimentKind::corrupt_dm:
        return 1.0 / config.dm_count_m;
    case ExperimentKind::wrong_agent: {
        const double m = config.dm_count_m;
        const double p = config.agent_count_p;
        return 1.0 / m + 1.0 / p - 1.0 / (m * p);
    }
    }
    return 0.0;
}

McEstimate mc_estimate(const AdversaryConfig& config) {
    config.validate();
    const int64_t n = static_cast<int64_t>(config.trials);
    uint64_t hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
    for (int64_t i = 0; i < n; ++i) {
        hits += run_trial(config, static_cast<uint64_t>(i)) ? 1 : 0;
    }
    return estimate_from_hits(config, hits);
}

McEstimate mc_estimate_serial(const AdversaryConfig& config) {
    config.validate();
    uint64_t hits = 0;
    for (uint64_t i = 0; i < config.trials; ++i) {
        hits += run_trial(config, i) ? 1 : 0;
    }
    return estimate_from_hits(config, hits);
}

} // namespace masmc
