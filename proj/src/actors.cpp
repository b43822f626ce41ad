#include "masmc/actors.hpp"

#include <algorithm>

#include "masmc/shares.hpp"

namespace masmc {

namespace {

// Fragment nonces pack (task_id, fragment_index); one party_submit per
// (task, party) keeps them unique per channel.
constexpr uint32_t kMaxFragments = 1u << 24;

std::vector<uint8_t> encode_fragment_body(uint32_t party_index, RingValue share) {
    std::vector<uint8_t> body(12);
    for (size_t b = 0; b < 4; ++b) {
        body[b] = static_cast<uint8_t>(party_index >> (8 * b));
    }
    for (size_t b = 0; b < 8; ++b) {
        body[4 + b] = static_cast<uint8_t>(share.v >> (8 * b));
    }
    return body;
}

std::pair<uint32_t, RingValue> decode_fragment_body(std::span<const uint8_t> body) {
    if (body.size() != 12) {
        throw AuthFailure("fragment body has unexpected size");
    }
    uint32_t party = 0;
    uint64_t share = 0;
    for (size_t b = 0; b < 4; ++b) {
        party |= static_cast<uint32_t>(body[b]) << (8 * b);
    }
    for (size_t b = 0; b < 8; ++b) {
        share |= static_cast<uint64_t>(body[4 + b]) << (8 * b);
    }
    return {party, RingValue{share}};
}

ChannelId party_to_dm(uint32_t party_index, uint32_t dm_index) {
    return {Role::party, party_index, Role::decision_maker, dm_index};
}

} // namespace

uint32_t ThresholdRule::threshold_for(uint32_t k_selected) const {
    switch (kind) {
    case Kind::one_third:
        return (k_selected + 2) / 3;
    case Kind::strict_majority:
        return k_selected / 2 + 1;
    case Kind::fixed:
        return fixed_t;
    }
    return 0;
}

std::string ThresholdRule::name() const {
    switch (kind) {
    case Kind::one_third:
        return "third";
    case Kind::strict_majority:
        return "majority";
    case Kind::fixed:
        return "fixed:" + std::to_string(fixed_t);
    }
    return "?";
}

std::vector<std::string> TaskSpec::validate() const {
    if (weights.empty()) {
        throw ConfigError("task needs at least one party (weights empty)");
    }
    if (fragments_r < 1 || fragments_r >= kMaxFragments) {
        throw ConfigError("fragments_r must be in [1, 2^24)");
    }
    if (dm_count_m < 1) {
        throw ConfigError("decision_makers_m must be >= 1");
    }
    if (agent_count_p < 1) {
        throw ConfigError("agents_p must be >= 1");
    }
    if (agents_selected_k < 1 || agents_selected_k > agent_count_p) {
        throw ConfigError("agents_selected_k must be in [1, agents_p]");
    }
    if (threshold.kind == ThresholdRule::Kind::fixed && threshold.fixed_t < 1) {
        throw ConfigError("fixed threshold must be >= 1");
    }
    if (modulus < 2 || !is_prime_u64(modulus)) {
        throw ConfigError("modulus must be a prime >= 2, got " +
                          std::to_string(modulus));
    }
    for (uint64_t w : weights) {
        if (w >= modulus) {
            throw ConfigError("weight " + std::to_string(w) +
                              " not reduced mod modulus");
        }
    }

    std::vector<std::string> warnings;
    if (fragments_r > dm_count_m) {
        warnings.push_back("fragments_r (" + std::to_string(fragments_r) +
                           ") exceeds decision_makers_m (" + std::to_string(dm_count_m) +
                           "): some decision maker holds several shares of one party");
    }
    if (dm_count_m >= agent_count_p) {
        warnings.push_back("decision_makers_m (" + std::to_string(dm_count_m) +
                           ") >= agents_p (" + std::to_string(agent_count_p) +
                           "): expected fewer decision makers than agents");
    }
    if (threshold.threshold_for(agents_selected_k) > agents_selected_k) {
        warnings.push_back("threshold " +
                           std::to_string(threshold.threshold_for(agents_selected_k)) +
                           " exceeds agents_selected_k (" +
                           std::to_string(agents_selected_k) +
                           "): no result can be accepted");
    }
    return warnings;
}

std::string IntermediateConclusion::fields_line() const {
    return "task=" + std::to_string(task_id) + " dm=" + std::to_string(dm_index) +
           " partial=" + std::to_string(partial.v) +
           " frags=" + std::to_string(contributing_fragment_count);
}

std::string AgentResult::fields_line() const {
    std::string value = reported ? std::to_string(reported->v) : "absent";
    return "task=" + std::to_string(task_id) + " agent=" + std::to_string(agent_id) +
           " value=" + value;
}

std::vector<FragmentMessage> party_submit(uint32_t party_index, RingValue input,
                                          const TaskSpec& task) {
    task.validate();
    const Ring ring(task.modulus);
    if (!ring.contains(input)) {
        throw ConfigError("party input not in ring");
    }

    Substream split_rng(task.seed, "party.split", {task.task_id, party_index});
    ShareVector shares = split_into_shares(ring, input, task.fragments_r, split_rng);

    std::vector<FragmentMessage> messages;
    messages.reserve(task.fragments_r);
    for (uint32_t f = 0; f < task.fragments_r; ++f) {
        const uint32_t dm = f % task.dm_count_m;
        const ChannelKey key = derive_channel_key(task.seed, party_to_dm(party_index, dm));
        const uint64_t nonce = (task.task_id << 24) | f;
        FragmentMessage msg;
        msg.task_id = task.task_id;
        msg.dm_index = dm;
        msg.fragment_index = f;
        msg.sealed = channel_seal(key, nonce, encode_fragment_body(party_index, shares[f]));
        messages.push_back(std::move(msg));
    }
    return messages;
}

void dm_ingest_fragment(DmState& dm, const TaskSpec& task,
                        const FragmentMessage& msg, uint32_t from_party) {
    if (msg.task_id != dm.task_id) {
        throw ConfigError("fragment for a different task");
    }
    if (msg.dm_index != dm.dm_index ||
        msg.fragment_index % task.dm_count_m != dm.dm_index) {
        throw ConfigError("misrouted fragment");
    }

    const ChannelKey key =
        derive_channel_key(task.seed, party_to_dm(from_party, dm.dm_index));
    const std::vector<uint8_t> body = channel_open(key, msg.sealed);
    const auto [claimed_party, share] = decode_fragment_body(body);
    if (claimed_party != from_party) {
        throw AuthFailure("sealed body names a different party than its channel");
    }
    if (share.v >= task.modulus) {
        throw ConfigError("share out of ring");
    }

    const auto slot = std::make_pair(from_party, msg.fragment_index);
    if (dm.fragments.contains(slot)) {
        throw DuplicateFragment("fragment already ingested for this (party, index)");
    }
    dm.fragments.emplace(slot, share);
}

IntermediateConclusion dm_build_intermediate(const DmState& dm, const TaskSpec& task) {
    std::vector<std::pair<uint32_t, uint32_t>> missing;
    for (uint32_t party = 0; party < task.party_count(); ++party) {
        for (uint32_t f = dm.dm_index; f < task.fragments_r; f += task.dm_count_m) {
            if (!dm.fragments.contains({party, f})) {
                missing.emplace_back(party, f);
            }
        }
    }
    if (!missing.empty()) {
        throw MissingFragments("decision maker " + std::to_string(dm.dm_index) +
                                   " is missing " + std::to_string(missing.size()) +
                                   " fragment(s)",
                               std::move(missing));
    }

    const Ring ring(task.modulus);
    RingValue partial{0};
    for (const auto& [slot, share] : dm.fragments) {
        const RingValue weight{task.weights[slot.first]};
        partial = ring.add(partial, ring.mul(weight, share));
    }
    if (task.blind_result && dm.blind_pad) {
        partial = ring.add(partial, *dm.blind_pad);
    }

    IntermediateConclusion ic;
    ic.task_id = dm.task_id;
    ic.dm_index = dm.dm_index;
    ic.partial = partial;
    ic.contributing_fragment_count = static_cast<uint32_t>(dm.fragments.size());
    return ic;
}

std::vector<uint32_t> dm_select_agents(const ReputationLedger& ledger, uint32_t k,
                                       const std::vector<bool>& available,
                                       Substream& rng) {
    struct Candidate {
        int64_t score;
        uint64_t tiebreak;
        uint32_t id;
    };

    std::vector<Candidate> candidates;
    for (uint32_t id = 0; id < available.size(); ++id) {
        // One draw per agent regardless of availability keeps the stream
        // layout independent of the availability pattern.
        const uint64_t tiebreak = rng.next();
        if (available[id]) {
            candidates.push_back({ledger.score(id), tiebreak, id});
        }
    }
    if (candidates.size() < k) {
        throw InsufficientAgents("need " + std::to_string(k) + " agents, only " +
                                 std::to_string(candidates.size()) + " available");
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                  if (a.score != b.score) {
                      return a.score > b.score;
                  }
                  if (a.tiebreak != b.tiebreak) {
                      return a.tiebreak < b.tiebreak;
                  }
                  return a.id < b.id;
              });

    std::vector<uint32_t> selected;
    selected.reserve(k);
    for (uint32_t i = 0; i < k; ++i) {
        selected.push_back(candidates[i].id);
    }
    return selected;
}

AgentResult agent_compute(const AgentState& agent,
                          std::span<const IntermediateConclusion> intermediates,
                          const TaskSpec& task) {
    AgentResult result;
    result.task_id = task.task_id;
    result.agent_id = agent.agent_id;

    if (agent.behavior.kind == AgentBehavior::Kind::crashed) {
        return result;
    }

    const Ring ring(task.modulus);
    RingValue honest{0};
    for (const IntermediateConclusion& ic : intermediates) {
        honest = ring.add(honest, ic.partial);
    }

    switch (agent.behavior.kind) {
    case AgentBehavior::Kind::honest:
        result.reported = honest;
        break;
    case AgentBehavior::Kind::malicious_constant:
        result.reported = ring.reduce(agent.behavior.value);
        break;
    case AgentBehavior::Kind::malicious_perturb:
        result.reported = ring.add(honest, ring.reduce(agent.behavior.value));
        break;
    case AgentBehavior::Kind::crashed:
        break;
    }
    return result;
}

} // namespace masmc
