#pragma once

#include <cstdint>
#include <map>

namespace masmc {

// Per-agent performance scores. Fresh agents start at zero; scores move only
// through update_reputation, and decision makers read them when allocating
// tasks.
class ReputationLedger {
public:
    ReputationLedger() = default;

    explicit ReputationLedger(uint32_t agent_count) {
        for (uint32_t id = 0; id < agent_count; ++id) {
            scores_[id] = 0;
        }
    }

    int64_t score(uint32_t agent_id) const {
        auto it = scores_.find(agent_id);
        return it == scores_.end() ? 0 : it->second;
    }

    void adjust(uint32_t agent_id, int64_t delta) { scores_[agent_id] += delta; }

    const std::map<uint32_t, int64_t>& scores() const { return scores_; }

private:
    std::map<uint32_t, int64_t> scores_;
};

} // namespace masmc
