#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "masmc/actors.hpp"
#include "masmc/reputation.hpp"
#include "masmc/ring.hpp"

namespace masmc {

// Reported values grouped by supporters, plus the agents that said nothing.
struct ResultTally {
    std::map<uint64_t, std::vector<uint32_t>> support;
    std::vector<uint32_t> absent;
};

ResultTally build_tally(std::span<const AgentResult> results);

struct Outcome {
    enum class Status {
        accepted,
        rejected_ambiguous,
        rejected_no_quorum,
    };

    Status status = Status::rejected_no_quorum;
    RingValue value;    // the accepted reported value (masked in blind mode)
    uint32_t support = 0;
    std::optional<RingValue> opened_value; // unmasked result, blind mode only

    bool accepted() const { return status == Status::accepted; }
    std::string status_name() const;
};

// Accepts the unique most-supported value when its support meets the
// threshold; a tie at the top rejects as ambiguous.
Outcome tally_results(std::span<const AgentResult> results, ThresholdRule rule,
                      uint32_t k_selected);

struct ReputationUpdate {
    std::vector<std::pair<uint32_t, int64_t>> deltas; // (agent, delta), id order
    std::vector<uint32_t> flagged;                    // reported a conflicting value
};

// Accepted tasks: +1 agreement, -2 conflicting value (flagged), -1 absent.
// Rejected tasks leave the ledger untouched.
ReputationUpdate update_reputation(ReputationLedger& ledger,
                                   std::span<const AgentResult> results,
                                   const Outcome& outcome);

// Ordered event log of one task run. Line format: "<step> <kind> <fields>".
// Byte-identical across runs of the same scenario and seed.
class Transcript {
public:
    void record(std::string_view kind, std::string_view fields);

    const std::vector<std::string>& lines() const { return lines_; }
    std::string to_text() const;

private:
    std::vector<std::string> lines_;
    uint64_t next_step_ = 0;
};

// One full task: its parameters, the party inputs, and how each agent behaves.
struct Scenario {
    TaskSpec task;
    std::vector<uint64_t> inputs; // one per party, reduced mod M
    std::vector<AgentBehavior> behaviors; // one per agent

    std::vector<std::string> validate() const;
};

struct RunResult {
    Outcome outcome;
    Transcript transcript;
    ReputationLedger ledger;
    std::vector<uint32_t> flagged;
    std::vector<uint32_t> selected_agents;
    std::vector<AgentResult> results;
};

// Full deterministic pipeline: submit, ingest, intermediates, select,
// compute, tally, reputation, blind open. When `ledger` is given it is used
// for selection and updated in place; otherwise a fresh ledger is used.
RunResult run_task(const Scenario& scenario, ReputationLedger* ledger = nullptr);

} // namespace masmc
