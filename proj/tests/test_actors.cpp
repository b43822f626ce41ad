#include <doctest.h>

#include <algorithm>
#include <vector>

#include "masmc/actors.hpp"
#include "masmc/voting.hpp"

using namespace masmc;

namespace {

TaskSpec small_task(uint32_t parties, uint32_t r, uint32_t m, uint32_t p,
                    uint64_t seed = 42) {
    TaskSpec task;
    task.weights.assign(parties, 1);
    task.fragments_r = r;
    task.dm_count_m = m;
    task.agent_count_p = p;
    task.agents_selected_k = p;
    task.seed = seed;
    return task;
}

// Feeds every fragment of every party into its decision maker and returns
// the m intermediates.
std::vector<IntermediateConclusion> run_fragment_phase(
    const TaskSpec& task, const std::vector<uint64_t>& inputs,
    std::vector<RingValue> pads = {}) {
    std::vector<DmState> dms(task.dm_count_m);
    for (uint32_t j = 0; j < task.dm_count_m; ++j) {
        dms[j].dm_index = j;
        dms[j].task_id = task.task_id;
        if (!pads.empty()) {
            dms[j].blind_pad = pads[j];
        }
    }
    for (uint32_t party = 0; party < task.party_count(); ++party) {
        for (const FragmentMessage& msg : party_submit(party, {inputs[party]}, task)) {
            dm_ingest_fragment(dms[msg.dm_index], task, msg, party);
        }
    }
    std::vector<IntermediateConclusion> out;
    for (const DmState& dm : dms) {
        out.push_back(dm_build_intermediate(dm, task));
    }
    return out;
}

uint64_t weighted_sum_mod(const TaskSpec& task, const std::vector<uint64_t>& inputs) {
    __uint128_t acc = 0;
    for (size_t i = 0; i < inputs.size(); ++i) {
        acc += static_cast<__uint128_t>(task.weights[i]) * inputs[i];
        acc %= task.modulus;
    }
    return static_cast<uint64_t>(acc);
}

} // namespace

TEST_CASE("round-robin routing: r=3, m=3 gives one fragment per dm") {
    const TaskSpec task = small_task(1, 3, 3, 5);
    const auto msgs = party_submit(0, {10}, task);
    REQUIRE(msgs.size() == 3);
    for (uint32_t f = 0; f < 3; ++f) {
        CHECK(msgs[f].fragment_index == f);
        CHECK(msgs[f].dm_index == f);
    }
}

TEST_CASE("round-robin routing: r=4, m=2 splits evenly") {
    const TaskSpec task = small_task(1, 4, 2, 5);
    const auto msgs = party_submit(0, {10}, task);
    REQUIRE(msgs.size() == 4);
    std::vector<uint32_t> dm0;
    std::vector<uint32_t> dm1;
    for (const auto& msg : msgs) {
        (msg.dm_index == 0 ? dm0 : dm1).push_back(msg.fragment_index);
    }
    CHECK(dm0 == std::vector<uint32_t>{0, 2});
    CHECK(dm1 == std::vector<uint32_t>{1, 3});
}

TEST_CASE("r=1 sends the raw input as the single share") {
    const TaskSpec task = small_task(1, 1, 1, 2);
    const auto msgs = party_submit(0, {10}, task);
    REQUIRE(msgs.size() == 1);
    CHECK(msgs[0].dm_index == 0);

    const auto intermediates = run_fragment_phase(task, {10});
    REQUIRE(intermediates.size() == 1);
    CHECK(intermediates[0].partial == RingValue{10});
    CHECK(intermediates[0].contributing_fragment_count == 1);
}

TEST_CASE("party_submit validates the task") {
    TaskSpec task = small_task(1, 1, 1, 2);
    task.agents_selected_k = 5; // > p
    CHECK_THROWS_AS(party_submit(0, {1}, task), ConfigError);
}

TEST_CASE("ingest: duplicates rejected, state intact") {
    const TaskSpec task = small_task(2, 2, 2, 3);
    DmState dm{0, task.task_id, {}, {}};
    const auto msgs = party_submit(0, {10}, task);
    const FragmentMessage& to_dm0 = msgs[0];
    REQUIRE(to_dm0.dm_index == 0);

    dm_ingest_fragment(dm, task, to_dm0, 0);
    CHECK(dm.fragments.size() == 1);
    CHECK_THROWS_AS(dm_ingest_fragment(dm, task, to_dm0, 0), DuplicateFragment);
    CHECK(dm.fragments.size() == 1);
}

TEST_CASE("ingest: any tamper leaves the state unchanged") {
    const TaskSpec task = small_task(1, 1, 1, 2);
    const auto msgs = party_submit(0, {10}, task);
    Substream rng(31, "test.ingest.tamper");
    for (int i = 0; i < 200; ++i) {
        FragmentMessage bad = msgs[0];
        switch (rng.below(3)) {
        case 0:
            bad.sealed.body[rng.below(bad.sealed.body.size())] ^=
                static_cast<uint8_t>(1 + rng.below(255));
            break;
        case 1:
            bad.sealed.tag[rng.below(bad.sealed.tag.size())] ^=
                static_cast<uint8_t>(1 + rng.below(255));
            break;
        default:
            bad.sealed.nonce ^= 1 + rng.below(1000);
            break;
        }
        DmState dm{0, task.task_id, {}, {}};
        CHECK_THROWS_AS(dm_ingest_fragment(dm, task, bad, 0), AuthFailure);
        CHECK(dm.fragments.empty());
    }
}

TEST_CASE("ingest: wrong channel party fails authentication") {
    const TaskSpec task = small_task(2, 1, 1, 2);
    const auto msgs = party_submit(0, {10}, task);
    DmState dm{0, task.task_id, {}, {}};
    CHECK_THROWS_AS(dm_ingest_fragment(dm, task, msgs[0], 1), AuthFailure);
}

TEST_CASE("intermediate: trivial single-party case") {
    const TaskSpec task = small_task(1, 1, 1, 2);
    const auto intermediates = run_fragment_phase(task, {10});
    CHECK(intermediates[0].partial == RingValue{10});
}

TEST_CASE("intermediate: missing fragments are itemized") {
    const TaskSpec task = small_task(2, 3, 2, 3);
    DmState dm{0, task.task_id, {}, {}};
    try {
        dm_build_intermediate(dm, task);
        FAIL("expected MissingFragments");
    } catch (const MissingFragments& e) {
        // dm 0 expects fragments 0 and 2 of each party
        const std::vector<std::pair<uint32_t, uint32_t>> expected = {
            {0, 0}, {0, 2}, {1, 0}, {1, 2}};
        CHECK(e.missing == expected);
    }
}

TEST_CASE("conservation: dm partials sum to the weighted input sum") {
    Substream rng(32, "test.conservation");
    for (int i = 0; i < 1000; ++i) {
        TaskSpec task = small_task(1 + static_cast<uint32_t>(rng.below(8)),
                                   1 + static_cast<uint32_t>(rng.below(6)),
                                   1 + static_cast<uint32_t>(rng.below(4)),
                                   1 + static_cast<uint32_t>(rng.below(9)), rng.next());
        task.function_kind = FunctionKind::weighted_sum;
        std::vector<uint64_t> inputs;
        for (uint32_t p = 0; p < task.party_count(); ++p) {
            task.weights[p] = rng.below(10000);
            inputs.push_back(rng.below(1000000));
        }

        const auto intermediates = run_fragment_phase(task, inputs);
        const Ring ring(task.modulus);
        RingValue total{0};
        uint32_t fragment_total = 0;
        for (const auto& ic : intermediates) {
            total = ring.add(total, ic.partial);
            fragment_total += ic.contributing_fragment_count;
        }
        CHECK(total.v == weighted_sum_mod(task, inputs));
        CHECK(fragment_total == task.fragments_r * task.party_count());
    }
}

TEST_CASE("blind pads shift the total by the master pad") {
    Substream rng(33, "test.blind");
    for (int i = 0; i < 200; ++i) {
        TaskSpec task = small_task(1 + static_cast<uint32_t>(rng.below(5)),
                                   1 + static_cast<uint32_t>(rng.below(4)),
                                   1 + static_cast<uint32_t>(rng.below(4)),
                                   1 + static_cast<uint32_t>(rng.below(5)), rng.next());
        task.blind_result = true;
        const Ring ring(task.modulus);

        std::vector<uint64_t> inputs;
        for (uint32_t p = 0; p < task.party_count(); ++p) {
            inputs.push_back(rng.below(1000000));
        }
        std::vector<RingValue> pads;
        RingValue master{0};
        for (uint32_t j = 0; j < task.dm_count_m; ++j) {
            pads.push_back(ring.uniform(rng));
            master = ring.add(master, pads.back());
        }

        const auto intermediates = run_fragment_phase(task, inputs, pads);
        RingValue total{0};
        for (const auto& ic : intermediates) {
            total = ring.add(total, ic.partial);
        }
        CHECK(total == ring.add({weighted_sum_mod(task, inputs)}, master));
    }
}

TEST_CASE("selection: fresh ledger picks everyone, order fixed by seed") {
    const ReputationLedger ledger(5);
    const std::vector<bool> available(5, true);

    Substream rng_a(9, "test.select", {1});
    const auto a = dm_select_agents(ledger, 5, available, rng_a);
    Substream rng_b(9, "test.select", {1});
    const auto b = dm_select_agents(ledger, 5, available, rng_b);
    CHECK(a == b);

    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<uint32_t>{0, 1, 2, 3, 4});
}

TEST_CASE("selection: a penalized agent is the one left out") {
    ReputationLedger ledger(5);
    ledger.adjust(2, -2);
    const std::vector<bool> available(5, true);
    Substream rng(9, "test.select", {2});
    const auto picked = dm_select_agents(ledger, 4, available, rng);
    CHECK(picked.size() == 4);
    CHECK(std::find(picked.begin(), picked.end(), 2u) == picked.end());
}

TEST_CASE("selection: highest scores win") {
    ReputationLedger ledger(4);
    ledger.adjust(1, 3);
    ledger.adjust(3, 5);
    const std::vector<bool> available(4, true);
    Substream rng(9, "test.select", {3});
    const auto picked = dm_select_agents(ledger, 2, available, rng);
    CHECK(picked == std::vector<uint32_t>{3, 1});
}

TEST_CASE("selection: unavailable agents never picked, shortage errors") {
    const ReputationLedger ledger(3);
    std::vector<bool> available{true, false, true};
    Substream rng(9, "test.select", {4});
    const auto picked = dm_select_agents(ledger, 2, available, rng);
    CHECK(std::find(picked.begin(), picked.end(), 1u) == picked.end());

    Substream rng2(9, "test.select", {5});
    CHECK_THROWS_AS(dm_select_agents(ledger, 3, available, rng2), InsufficientAgents);
}

TEST_CASE("agent behaviors over a known intermediate sum") {
    const TaskSpec task = small_task(3, 3, 3, 5);
    const auto intermediates = run_fragment_phase(task, {10, 20, 30});

    const AgentResult honest =
        agent_compute({0, AgentBehavior::honest(), true}, intermediates, task);
    REQUIRE(honest.reported.has_value());
    CHECK(honest.reported->v == 60);

    const AgentResult perturbed =
        agent_compute({1, AgentBehavior::malicious_perturb(1), true}, intermediates, task);
    CHECK(perturbed.reported->v == 61);

    const AgentResult constant =
        agent_compute({2, AgentBehavior::malicious_constant(99), true}, intermediates, task);
    CHECK(constant.reported->v == 99);

    const AgentResult crashed =
        agent_compute({3, AgentBehavior::crashed(), true}, intermediates, task);
    CHECK_FALSE(crashed.reported.has_value());
}

TEST_CASE("honest agents agree on identical intermediates") {
    Substream rng(34, "test.agreement");
    for (int i = 0; i < 1000; ++i) {
        TaskSpec task = small_task(1, 1, 1 + static_cast<uint32_t>(rng.below(4)), 2);
        const Ring ring(task.modulus);
        std::vector<IntermediateConclusion> intermediates;
        for (uint32_t j = 0; j < task.dm_count_m; ++j) {
            intermediates.push_back({task.task_id, j, ring.uniform(rng), 1});
        }
        const AgentResult a =
            agent_compute({0, AgentBehavior::honest(), true}, intermediates, task);
        const AgentResult b =
            agent_compute({1, AgentBehavior::honest(), true}, intermediates, task);
        CHECK(a.reported == b.reported);
    }
}

TEST_CASE("task validation: hard errors and soft warnings") {
    CHECK_THROWS_AS(small_task(0, 1, 1, 1).validate(), ConfigError);
    CHECK_THROWS_AS(small_task(1, 0, 1, 1).validate(), ConfigError);
    CHECK_THROWS_AS(small_task(1, 1, 0, 1).validate(), ConfigError);
    CHECK_THROWS_AS(small_task(1, 1, 1, 0).validate(), ConfigError);

    TaskSpec bad_modulus = small_task(1, 1, 1, 2);
    bad_modulus.modulus = 100;
    CHECK_THROWS_AS(bad_modulus.validate(), ConfigError);

    TaskSpec unreduced = small_task(1, 1, 1, 2);
    unreduced.modulus = 251;
    unreduced.weights = {300};
    CHECK_THROWS_AS(unreduced.validate(), ConfigError);

    // r > m and m >= p warn but do not fail
    const TaskSpec warned = small_task(1, 5, 2, 2);
    const auto warnings = warned.validate();
    REQUIRE(warnings.size() == 2);
    CHECK(warnings[0].find("fragments_r") != std::string::npos);
    CHECK(warnings[1].find("decision_makers_m") != std::string::npos);

    CHECK(small_task(1, 2, 2, 3).validate().empty());
}

TEST_CASE("threshold rules") {
    CHECK(ThresholdRule::one_third().threshold_for(5) == 2);
    CHECK(ThresholdRule::one_third().threshold_for(9) == 3);
    CHECK(ThresholdRule::one_third().threshold_for(1) == 1);
    CHECK(ThresholdRule::strict_majority().threshold_for(5) == 3);
    CHECK(ThresholdRule::strict_majority().threshold_for(9) == 5);
    CHECK(ThresholdRule::strict_majority().threshold_for(2) == 2);
    CHECK(ThresholdRule::fixed(4).threshold_for(9) == 4);
}
