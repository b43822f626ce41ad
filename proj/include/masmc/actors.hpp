#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "masmc/reputation.hpp"
#include "masmc/ring.hpp"
#include "masmc/rng.hpp"
#include "masmc/seal.hpp"

namespace masmc {

enum class FunctionKind {
    sum,
    weighted_sum,
};

// Acceptance threshold for the agent vote, as a function of the number of
// selected agents k.
struct ThresholdRule {
    enum class Kind {
        one_third,     // ceil(k/3)
        strict_majority, // floor(k/2) + 1
        fixed,
    };

    Kind kind = Kind::one_third;
    uint32_t fixed_t = 0;

    static ThresholdRule one_third() { return {Kind::one_third, 0}; }
    static ThresholdRule strict_majority() { return {Kind::strict_majority, 0}; }
    static ThresholdRule fixed(uint32_t t) { return {Kind::fixed, t}; }

    uint32_t threshold_for(uint32_t k_selected) const;
    std::string name() const;
};

// Everything that defines one computation task: the function, the protocol
// shape (r fragments, m decision makers, p agents, k selected), the vote
// rule, and the master seed all randomness derives from.
struct TaskSpec {
    uint64_t task_id = 1;
    FunctionKind function_kind = FunctionKind::sum;
    std::vector<uint64_t> weights; // one per party, already reduced mod M
    uint32_t fragments_r = 1;
    uint32_t dm_count_m = 1;
    uint32_t agent_count_p = 1;
    uint32_t agents_selected_k = 1;
    ThresholdRule threshold;
    bool blind_result = false;
    uint64_t modulus = kDefaultModulus;
    uint64_t seed = 0;

    uint32_t party_count() const { return static_cast<uint32_t>(weights.size()); }

    // Throws ConfigError on hard violations; returns soft warnings
    // (r > m, m >= p, unreachable fixed threshold).
    std::vector<std::string> validate() const;
};

// One sealed share in transit from a party to a decision maker. The body
// seals (party_index, share); routing metadata stays in the clear.
struct FragmentMessage {
    uint64_t task_id = 0;
    uint32_t dm_index = 0;
    uint32_t fragment_index = 0;
    SealedMessage sealed;
};

// A decision maker's party-anonymous partial aggregate. Its serialized form
// carries no party identifiers.
struct IntermediateConclusion {
    uint64_t task_id = 0;
    uint32_t dm_index = 0;
    RingValue partial;
    uint32_t contributing_fragment_count = 0;

    std::string fields_line() const;
};

struct AgentBehavior {
    enum class Kind {
        honest,
        malicious_constant, // always reports `value`
        malicious_perturb,  // reports honest value + `value` mod M
        crashed,            // reports nothing
    };

    Kind kind = Kind::honest;
    uint64_t value = 0;

    static AgentBehavior honest() { return {Kind::honest, 0}; }
    static AgentBehavior malicious_constant(uint64_t v) { return {Kind::malicious_constant, v}; }
    static AgentBehavior malicious_perturb(uint64_t d) { return {Kind::malicious_perturb, d}; }
    static AgentBehavior crashed() { return {Kind::crashed, 0}; }
};

struct AgentState {
    uint32_t agent_id = 0;
    AgentBehavior behavior;
    bool available = true;
};

struct AgentResult {
    uint64_t task_id = 0;
    uint32_t agent_id = 0;
    std::optional<RingValue> reported; // empty when the agent crashed

    std::string fields_line() const;
};

// Shares a decision maker has accepted so far, keyed by (party, fragment).
struct DmState {
    uint32_t dm_index = 0;
    uint64_t task_id = 0;
    std::map<std::pair<uint32_t, uint32_t>, RingValue> fragments;
    std::optional<RingValue> blind_pad;
};

// Fragments the input and seals fragment f for decision maker f mod m.
std::vector<FragmentMessage> party_submit(uint32_t party_index, RingValue input,
                                          const TaskSpec& task);

// Opens and records one fragment. `from_party` is the channel the message
// arrived on; the sealed body must agree with it.
void dm_ingest_fragment(DmState& dm, const TaskSpec& task,
                        const FragmentMessage& msg, uint32_t from_party);

// Weighted partial sum over every fragment this decision maker holds, plus
// its blind pad when one is set. Party identities are dropped here.
IntermediateConclusion dm_build_intermediate(const DmState& dm, const TaskSpec& task);

// The k available agents with the highest scores; ties broken by the seeded
// substream. Result order is selection order.
std::vector<uint32_t> dm_select_agents(const ReputationLedger& ledger, uint32_t k,
                                       const std::vector<bool>& available,
                                       Substream& rng);

// Combines the intermediates per the agent's behavior. Misbehavior is data,
// not an error.
AgentResult agent_compute(const AgentState& agent,
                          std::span<const IntermediateConclusion> intermediates,
                          const TaskSpec& task);

} // namespace masmc
