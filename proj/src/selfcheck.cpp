#include "masmc/selfcheck.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "masmc/figures.hpp"
#include "masmc/seal.hpp"
#include "masmc/shares.hpp"
#include "masmc/threat.hpp"
#include "masmc/voting.hpp"

namespace masmc {

namespace {

constexpr uint64_t kSelfcheckSeed = 0x5e1fc4ec;

bool check_share_round_trip() {
    const Ring ring(kDefaultModulus);
    Substream rng(kSelfcheckSeed, "selfcheck.shares");
    for (int i = 0; i < 500; ++i) {
        const RingValue v = ring.uniform(rng);
        const uint32_t r = 1 + static_cast<uint32_t>(rng.below(8));
        const ShareVector shares = split_into_shares(ring, v, r, rng);
        if (shares.size() != r || recombine_shares(ring, shares) != v) {
            return false;
        }
    }
    return true;
}

bool check_seal_round_trip() {
    const ChannelKey key = derive_channel_key(
        kSelfcheckSeed, {Role::party, 0, Role::decision_maker, 0});
    Substream rng(kSelfcheckSeed, "selfcheck.seal");
    for (int i = 0; i < 200; ++i) {
        std::vector<uint8_t> plaintext(rng.below(64));
        for (uint8_t& b : plaintext) {
            b = static_cast<uint8_t>(rng.below(256));
        }
        const SealedMessage sealed = channel_seal(key, i, plaintext);
        if (channel_open(key, sealed) != plaintext) {
            return false;
        }
        if (!sealed.body.empty()) {
            SealedMessage tampered = sealed;
            tampered.body[rng.below(tampered.body.size())] ^= 0x01;
            try {
                channel_open(key, tampered);
                return false;
            } catch (const AuthFailure&) {
            }
        }
    }
    return true;
}

Scenario random_all_honest_scenario(uint64_t seed) {
    Substream rng(seed, "selfcheck.scenario");
    Scenario sc;
    const Ring ring(kDefaultModulus);
    const uint32_t parties = 1 + static_cast<uint32_t>(rng.below(6));
    sc.task.function_kind = FunctionKind::weighted_sum;
    for (uint32_t i = 0; i < parties; ++i) {
        sc.task.weights.push_back(rng.below(1000));
        sc.inputs.push_back(rng.below(1000000));
    }
    sc.task.fragments_r = 1 + static_cast<uint32_t>(rng.below(5));
    sc.task.dm_count_m = 1 + static_cast<uint32_t>(rng.below(4));
    sc.task.agent_count_p = 1 + static_cast<uint32_t>(rng.below(7));
    sc.task.agents_selected_k = sc.task.agent_count_p;
    sc.task.threshold = ThresholdRule::one_third();
    sc.task.seed = rng.next();
    sc.behaviors.assign(sc.task.agent_count_p, AgentBehavior::honest());
    return sc;
}

uint64_t weighted_sum_mod(const Scenario& sc) {
    __uint128_t acc = 0;
    for (size_t i = 0; i < sc.inputs.size(); ++i) {
        acc += static_cast<__uint128_t>(sc.task.weights[i]) * sc.inputs[i];
        acc %= sc.task.modulus;
    }
    return static_cast<uint64_t>(acc);
}

bool check_all_honest_correctness() {
    for (uint64_t i = 0; i < 100; ++i) {
        const Scenario sc =
            random_all_honest_scenario(derive_u64(kSelfcheckSeed, "selfcheck.case", {i}));
        const RunResult run = run_task(sc);
        if (!run.outcome.accepted() || run.outcome.value.v != weighted_sum_mod(sc) ||
            run.outcome.support != sc.task.agents_selected_k) {
            return false;
        }
    }
    return true;
}

bool check_inclusion_exclusion() {
    for (uint32_t m = 1; m <= 20; ++m) {
        for (uint32_t p = 1; p <= 20; ++p) {
            const double lhs = eq_p_wrong_agent(m, p);
            const double rhs = 1.0 - (1.0 - 1.0 / m) * (1.0 - 1.0 / p);
            if (std::abs(lhs - rhs) > 1e-12) {
                return false;
            }
        }
    }
    return true;
}

bool check_determinism() {
    const Scenario sc = random_all_honest_scenario(kSelfcheckSeed);
    const RunResult a = run_task(sc);
    const RunResult b = run_task(sc);
    if (a.transcript.to_text() != b.transcript.to_text()) {
        return false;
    }

    AdversaryConfig config;
    config.kind = ExperimentKind::wrong_agent;
    config.dm_count_m = 3;
    config.agent_count_p = 7;
    config.trials = 20000;
    config.seed = kSelfcheckSeed;
    const McEstimate x = mc_estimate(config);
    const McEstimate y = mc_estimate_serial(config);
    return x.p_hat == y.p_hat;
}

} // namespace

int run_selfcheck(std::ostream& out) {
    struct Group {
        const char* name;
        bool (*check)();
    };
    const Group groups[] = {
        {"share_round_trip", check_share_round_trip},
        {"seal_round_trip", check_seal_round_trip},
        {"all_honest_correctness", check_all_honest_correctness},
        {"inclusion_exclusion", check_inclusion_exclusion},
        {"determinism", check_determinism},
    };

    int failures = 0;
    for (const Group& group : groups) {
        const bool ok = group.check();
        out << (ok ? "PASS " : "FAIL ") << group.name << "\n";
        if (!ok) {
            ++failures;
        }
    }
    return failures;
}

} // namespace masmc
