#include "masmc/voting.hpp"

#include <algorithm>

namespace masmc {

namespace {

std::string join_ids(std::span<const uint32_t> ids) {
    std::string out;
    for (uint32_t id : ids) {
        if (!out.empty()) {
            out += ",";
        }
        out += std::to_string(id);
    }
    return out.empty() ? "-" : out;
}

} // namespace

ResultTally build_tally(std::span<const AgentResult> results) {
    ResultTally tally;
    for (const AgentResult& r : results) {
        if (r.reported) {
            tally.support[r.reported->v].push_back(r.agent_id);
        } else {
            tally.absent.push_back(r.agent_id);
        }
    }
    return tally;
}

std::string Outcome::status_name() const {
    switch (status) {
    case Status::accepted:
        return "ACCEPTED";
    case Status::rejected_ambiguous:
        return "REJECTED_AMBIGUOUS";
    case Status::rejected_no_quorum:
        return "REJECTED_NO_QUORUM";
    }
    return "?";
}

Outcome tally_results(std::span<const AgentResult> results, ThresholdRule rule,
                      uint32_t k_selected) {
    if (results.empty()) {
        throw EmptyTally("no agent results to tally");
    }

    const ResultTally tally = build_tally(results);
    const uint32_t threshold = rule.threshold_for(k_selected);

    size_t best_support = 0;
    uint64_t best_value = 0;
    size_t values_at_best = 0;
    for (const auto& [value, supporters] : tally.support) {
        if (supporters.size() > best_support) {
            best_support = supporters.size();
            best_value = value;
            values_at_best = 1;
        } else if (supporters.size() == best_support) {
            ++values_at_best;
        }
    }

    Outcome out;
    if (best_support == 0) {
        out.status = Outcome::Status::rejected_no_quorum;
    } else if (values_at_best > 1) {
        out.status = Outcome::Status::rejected_ambiguous;
    } else if (best_support < threshold) {
        out.status = Outcome::Status::rejected_no_quorum;
    } else {
        out.status = Outcome::Status::accepted;
        out.value = RingValue{best_value};
        out.support = static_cast<uint32_t>(best_support);
    }
    return out;
}

ReputationUpdate update_reputation(ReputationLedger& ledger,
                                   std::span<const AgentResult> results,
                                   const Outcome& outcome) {
    ReputationUpdate update;
    if (!outcome.accepted()) {
        return update;
    }

    std::vector<AgentResult> ordered(results.begin(), results.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const AgentResult& a, const AgentResult& b) {
                  return a.agent_id < b.agent_id;
              });

    for (const AgentResult& r : ordered) {
        int64_t delta;
        if (!r.reported) {
            delta = -1;
        } else if (*r.reported == outcome.value) {
            delta = +1;
        } else {
            delta = -2;
            update.flagged.push_back(r.agent_id);
        }
        ledger.adjust(r.agent_id, delta);
        update.deltas.emplace_back(r.agent_id, delta);
    }
    return update;
}

void Transcript::record(std::string_view kind, std::string_view fields) {
    std::string line = std::to_string(next_step_++);
    line += " ";
    line += kind;
    if (!fields.empty()) {
        line += " ";
        line += fields;
    }
    lines_.push_back(std::move(line));
}

std::string Transcript::to_text() const {
    std::string text;
    for (const std::string& line : lines_) {
        text += line;
        text += "\n";
    }
    return text;
}

std::vector<std::string> Scenario::validate() const {
    std::vector<std::string> warnings = task.validate();
    if (inputs.size() != task.party_count()) {
        throw ConfigError("inputs count (" + std::to_string(inputs.size()) +
                          ") != party count (" + std::to_string(task.party_count()) + ")");
    }
    if (behaviors.size() != task.agent_count_p) {
        throw ConfigError("behaviors count (" + std::to_string(behaviors.size()) +
                          ") != agents_p (" + std::to_string(task.agent_count_p) + ")");
    }
    for (uint64_t input : inputs) {
        if (input >= task.modulus) {
            throw ConfigError("input " + std::to_string(input) +
                              " not reduced mod modulus");
        }
    }
    return warnings;
}

RunResult run_task(const Scenario& scenario, ReputationLedger* ledger) {
    const std::vector<std::string> warnings = scenario.validate();
    const TaskSpec& task = scenario.task;
    const Ring ring(task.modulus);

    RunResult run;
    Transcript& tr = run.transcript;
    tr.record("task_begin",
              "task=" + std::to_string(task.task_id) +
                  " function=" + (task.function_kind == FunctionKind::sum ? "sum" : "wsum") +
                  " parties=" + std::to_string(task.party_count()) +
                  " r=" + std::to_string(task.fragments_r) +
                  " m=" + std::to_string(task.dm_count_m) +
                  " p=" + std::to_string(task.agent_count_p) +
                  " k=" + std::to_string(task.agents_selected_k) +
                  " threshold=" + task.threshold.name() +
                  " blind=" + (task.blind_result ? "true" : "false") +
                  " modulus=" + std::to_string(task.modulus) +
                  " seed=" + std::to_string(task.seed));
    for (const std::string& w : warnings) {
        tr.record("warn", w);
    }

    // Blind pads: one uniform pad per decision maker; their sum is the master
    // pad the opener removes at the end. Pad values never enter the log.
    std::vector<RingValue> pads(task.dm_count_m, RingValue{0});
    OutputPad master_pad{RingValue{0}, 0};
    if (task.blind_result) {
        for (uint32_t j = 0; j < task.dm_count_m; ++j) {
            Substream pad_rng(task.seed, "dm.pad", {task.task_id, j});
            pads[j] = ring.uniform(pad_rng);
            master_pad.pad = ring.add(master_pad.pad, pads[j]);
        }
        tr.record("pads_issued", "task=" + std::to_string(task.task_id) +
                                     " count=" + std::to_string(task.dm_count_m));
    }

    std::vector<DmState> dms(task.dm_count_m);
    for (uint32_t j = 0; j < task.dm_count_m; ++j) {
        dms[j].dm_index = j;
        dms[j].task_id = task.task_id;
        if (task.blind_result) {
            dms[j].blind_pad = pads[j];
        }
    }

    for (uint32_t party = 0; party < task.party_count(); ++party) {
        const RingValue input{scenario.inputs[party]};
        for (const FragmentMessage& msg : party_submit(party, input, task)) {
            tr.record("fragment_sent",
                      "party=" + std::to_string(party) + " dm=" + std::to_string(msg.dm_index) +
                          " frag=" + std::to_string(msg.fragment_index) +
                          " bytes=" + std::to_string(msg.sealed.body.size()));
            dm_ingest_fragment(dms[msg.dm_index], task, msg, party);
            tr.record("fragment_ingested",
                      "dm=" + std::to_string(msg.dm_index) +
                          " frag=" + std::to_string(msg.fragment_index) +
                          " party=" + std::to_string(party));
        }
    }

    std::vector<IntermediateConclusion> intermediates;
    intermediates.reserve(task.dm_count_m);
    for (uint32_t j = 0; j < task.dm_count_m; ++j) {
        intermediates.push_back(dm_build_intermediate(dms[j], task));
        tr.record("intermediate", intermediates.back().fields_line());
    }

    ReputationLedger local =
        ledger ? *ledger : ReputationLedger(task.agent_count_p);
    Substream select_rng(task.seed, "dm.select", {task.task_id});
    const std::vector<bool> available(task.agent_count_p, true);
    run.selected_agents =
        dm_select_agents(local, task.agents_selected_k, available, select_rng);
    tr.record("agents_selected", "ids=" + join_ids(run.selected_agents));

    for (uint32_t id : run.selected_agents) {
        const AgentState agent{id, scenario.behaviors[id], true};
        run.results.push_back(agent_compute(agent, intermediates, task));
        tr.record("result", run.results.back().fields_line());
    }

    run.outcome = tally_results(run.results, task.threshold, task.agents_selected_k);
    {
        const ResultTally tally = build_tally(run.results);
        std::string votes;
        for (const auto& [value, supporters] : tally.support) {
            if (!votes.empty()) {
                votes += ",";
            }
            votes += std::to_string(value) + ":" + std::to_string(supporters.size());
        }
        tr.record("tally", "votes=" + (votes.empty() ? "-" : votes) +
                               " absent=" + std::to_string(tally.absent.size()));
    }
    tr.record("outcome", "status=" + run.outcome.status_name() +
                             " value=" + std::to_string(run.outcome.value.v) +
                             " support=" + std::to_string(run.outcome.support) +
                             " k=" + std::to_string(task.agents_selected_k));

    const ReputationUpdate update =
        update_reputation(local, run.results, run.outcome);
    for (const auto& [agent_id, delta] : update.deltas) {
        tr.record("reputation", "agent=" + std::to_string(agent_id) +
                                    " delta=" + std::to_string(delta) +
                                    " score=" + std::to_string(local.score(agent_id)));
    }
    for (uint32_t agent_id : update.flagged) {
        tr.record("flagged", "agent=" + std::to_string(agent_id));
    }
    run.flagged = update.flagged;

    if (task.blind_result && run.outcome.accepted()) {
        run.outcome.opened_value = remove_pad(ring, run.outcome.value, master_pad);
        tr.record("opened", "task=" + std::to_string(task.task_id) +
                                " value=" + std::to_string(run.outcome.opened_value->v));
    }

    tr.record("task_end", "status=" + run.outcome.status_name());

    if (ledger) {
        *ledger = local;
    }
    run.ledger = std::move(local);
    return run;
}

} // namespace masmc
