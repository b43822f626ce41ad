#include "masmc/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace masmc {

namespace {

struct KeyedValue {
    std::string value;
    size_t line;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_commas(std::string_view s) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t comma = s.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(s.substr(start)));
            break;
        }
        out.push_back(trim(s.substr(start, comma - start)));
        start = comma + 1;
    }
    if (out.size() == 1 && out[0].empty()) {
        out.clear();
    }
    return out;
}

[[noreturn]] void fail(std::string_view name, size_t line, const std::string& what) {
    throw ParseError(std::string(name) + ":" + std::to_string(line) + ": " + what);
}

uint64_t parse_u64(std::string_view name, size_t line, std::string_view field,
                   std::string_view what) {
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        fail(name, line, "expected a non-negative integer for " + std::string(what) +
                             ", got '" + std::string(field) + "'");
    }
    return value;
}

int64_t parse_i64(std::string_view name, size_t line, std::string_view field,
                  std::string_view what) {
    int64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        fail(name, line, "expected an integer for " + std::string(what) + ", got '" +
                             std::string(field) + "'");
    }
    return value;
}

} // namespace

Scenario parse_scenario_text(std::string_view text, std::string_view name) {
    static const std::set<std::string> known_keys = {
        "parties",       "inputs",      "function",          "weights",
        "fragments_r",   "decision_makers_m", "agents_p",    "agents_selected_k",
        "threshold",     "blind_result", "malicious",        "modulus",
        "seed",
    };

    std::map<std::string, KeyedValue> entries;
    {
        size_t pos = 0;
        size_t line_no = 0;
        while (pos <= text.size()) {
            size_t eol = text.find('\n', pos);
            std::string_view raw = (eol == std::string_view::npos)
                                       ? text.substr(pos)
                                       : text.substr(pos, eol - pos);
            pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
            ++line_no;

            std::string_view line = trim(raw);
            if (line.empty() || line.front() == '#') {
                continue;
            }
            size_t colon = line.find(':');
            if (colon == std::string_view::npos) {
                fail(name, line_no, "expected 'key: value', got '" + std::string(line) + "'");
            }
            std::string key(trim(line.substr(0, colon)));
            std::string value(trim(line.substr(colon + 1)));
            if (!known_keys.contains(key)) {
                fail(name, line_no, "unknown key '" + key + "'");
            }
            if (entries.contains(key)) {
                fail(name, line_no, "duplicate key '" + key + "' (first on line " +
                                        std::to_string(entries[key].line) + ")");
            }
            entries[key] = {value, line_no};
        }
    }

    auto require = [&](const std::string& key) -> const KeyedValue& {
        auto it = entries.find(key);
        if (it == entries.end()) {
            throw ParseError(std::string(name) + ": missing required key '" + key + "'");
        }
        return it->second;
    };

    Scenario scenario;
    TaskSpec& task = scenario.task;

    // modulus first: inputs, weights and malicious values reduce mod M
    if (auto it = entries.find("modulus"); it != entries.end()) {
        if (it->second.value == "default") {
            task.modulus = kDefaultModulus;
        } else {
            uint64_t m = parse_u64(name, it->second.line, it->second.value, "modulus");
            if (m < 2 || !is_prime_u64(m)) {
                fail(name, it->second.line,
                     "modulus must be a prime >= 2 or 'default', got '" +
                         it->second.value + "'");
            }
            task.modulus = m;
        }
    }
    const Ring ring(task.modulus);

    const KeyedValue& parties_kv = require("parties");
    const uint64_t parties = parse_u64(name, parties_kv.line, parties_kv.value, "parties");
    if (parties < 1) {
        fail(name, parties_kv.line, "parties must be >= 1");
    }

    const KeyedValue& function_kv = require("function");
    if (function_kv.value == "sum") {
        task.function_kind = FunctionKind::sum;
    } else if (function_kv.value == "wsum") {
        task.function_kind = FunctionKind::weighted_sum;
    } else {
        fail(name, function_kv.line,
             "function must be 'sum' or 'wsum', got '" + function_kv.value + "'");
    }

    if (task.function_kind == FunctionKind::weighted_sum) {
        const KeyedValue& weights_kv = require("weights");
        for (std::string_view field : split_commas(weights_kv.value)) {
            const int64_t w = parse_i64(name, weights_kv.line, field, "weight");
            task.weights.push_back(ring.reduce_signed(w).v);
        }
        if (task.weights.size() != parties) {
            fail(name, weights_kv.line,
                 "weights count (" + std::to_string(task.weights.size()) +
                     ") != parties (" + std::to_string(parties) + ")");
        }
    } else {
        if (entries.contains("weights")) {
            fail(name, entries["weights"].line, "weights are only valid for function: wsum");
        }
        task.weights.assign(parties, 1);
    }

    const KeyedValue& inputs_kv = require("inputs");
    for (std::string_view field : split_commas(inputs_kv.value)) {
        const int64_t v = parse_i64(name, inputs_kv.line, field, "input");
        scenario.inputs.push_back(ring.reduce_signed(v).v);
    }
    if (scenario.inputs.size() != parties) {
        fail(name, inputs_kv.line,
             "inputs count (" + std::to_string(scenario.inputs.size()) + ") != parties (" +
                 std::to_string(parties) + ")");
    }

    const KeyedValue& r_kv = require("fragments_r");
    task.fragments_r = static_cast<uint32_t>(parse_u64(name, r_kv.line, r_kv.value, "fragments_r"));
    const KeyedValue& m_kv = require("decision_makers_m");
    task.dm_count_m =
        static_cast<uint32_t>(parse_u64(name, m_kv.line, m_kv.value, "decision_makers_m"));
    const KeyedValue& p_kv = require("agents_p");
    task.agent_count_p = static_cast<uint32_t>(parse_u64(name, p_kv.line, p_kv.value, "agents_p"));
    const KeyedValue& k_kv = require("agents_selected_k");
    task.agents_selected_k =
        static_cast<uint32_t>(parse_u64(name, k_kv.line, k_kv.value, "agents_selected_k"));

    const KeyedValue& threshold_kv = require("threshold");
    if (threshold_kv.value == "third") {
        task.threshold = ThresholdRule::one_third();
    } else if (threshold_kv.value == "majority") {
        task.threshold = ThresholdRule::strict_majority();
    } else if (threshold_kv.value.starts_with("fixed:")) {
        const uint64_t t = parse_u64(name, threshold_kv.line,
                                     std::string_view(threshold_kv.value).substr(6),
                                     "fixed threshold");
        if (t < 1) {
            fail(name, threshold_kv.line, "fixed threshold must be >= 1");
        }
        task.threshold = ThresholdRule::fixed(static_cast<uint32_t>(t));
    } else {
        fail(name, threshold_kv.line,
             "threshold must be 'third', 'majority' or 'fixed:<t>', got '" +
                 threshold_kv.value + "'");
    }

    if (auto it = entries.find("blind_result"); it != entries.end()) {
        if (it->second.value == "true") {
            task.blind_result = true;
        } else if (it->second.value == "false") {
            task.blind_result = false;
        } else {
            fail(name, it->second.line, "blind_result must be 'true' or 'false', got '" +
                                            it->second.value + "'");
        }
    }

    const KeyedValue& seed_kv = require("seed");
    task.seed = parse_u64(name, seed_kv.line, seed_kv.value, "seed");

    scenario.behaviors.assign(task.agent_count_p, AgentBehavior::honest());
    if (auto it = entries.find("malicious"); it != entries.end()) {
        std::set<uint64_t> seen;
        for (std::string_view entry : split_commas(it->second.value)) {
            const size_t first = entry.find(':');
            if (first == std::string_view::npos) {
                fail(name, it->second.line,
                     "malicious entry must be '<id>:constant:<v>', '<id>:perturb:<d>' "
                     "or '<id>:crash', got '" + std::string(entry) + "'");
            }
            const uint64_t id = parse_u64(name, it->second.line, entry.substr(0, first),
                                          "malicious agent id");
            if (id >= task.agent_count_p) {
                fail(name, it->second.line,
                     "malicious agent id " + std::to_string(id) + " >= agents_p (" +
                         std::to_string(task.agent_count_p) + ")");
            }
            if (!seen.insert(id).second) {
                fail(name, it->second.line,
                     "agent " + std::to_string(id) + " listed twice in malicious");
            }
            std::string_view rest = entry.substr(first + 1);
            if (rest == "crash") {
                scenario.behaviors[id] = AgentBehavior::crashed();
                continue;
            }
            const size_t second = rest.find(':');
            if (second == std::string_view::npos) {
                fail(name, it->second.line,
                     "malicious entry '" + std::string(entry) + "' needs a value");
            }
            const std::string_view mode = rest.substr(0, second);
            const int64_t value =
                parse_i64(name, it->second.line, rest.substr(second + 1), "malicious value");
            if (mode == "constant") {
                scenario.behaviors[id] =
                    AgentBehavior::malicious_constant(ring.reduce_signed(value).v);
            } else if (mode == "perturb") {
                scenario.behaviors[id] =
                    AgentBehavior::malicious_perturb(ring.reduce_signed(value).v);
            } else {
                fail(name, it->second.line,
                     "malicious mode must be 'constant', 'perturb' or 'crash', got '" +
                         std::string(mode) + "'");
            }
        }
    }

    try {
        scenario.validate();
    } catch (const ConfigError& e) {
        throw ParseError(std::string(name) + ": " + e.what());
    }
    return scenario;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path + ": cannot open scenario file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str(), path);
}

} // namespace masmc
