#pragma once

#include <string>
#include <string_view>

#include "masmc/voting.hpp"

namespace masmc {

// Plain key-value scenario text. Keys:
//   parties, inputs, function (sum|wsum), weights (wsum only), fragments_r,
//   decision_makers_m, agents_p, agents_selected_k,
//   threshold (third|majority|fixed:<t>), blind_result (true|false),
//   malicious (<id>:constant:<v> | <id>:perturb:<d> | <id>:crash, ...),
//   modulus (prime or "default"), seed.
// Blank lines and lines starting with '#' are ignored. Unknown or duplicate
// keys are rejected; every diagnostic carries "<name>:<line>:".
Scenario parse_scenario_text(std::string_view text, std::string_view name = "<scenario>");

Scenario parse_scenario_file(const std::string& path);

} // namespace masmc
